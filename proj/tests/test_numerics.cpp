#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"
#include "urt/rng.hpp"

using namespace urt;

TEST_CASE("qfunc matches erfc identity and known points") {
  CHECK(num::qfunc(0.0) == doctest::Approx(0.5));
  CHECK(num::qfunc(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
  CHECK(num::qfunc(6.0) == doctest::Approx(9.865876450376946e-10).epsilon(1e-9));
  CHECK(num::qfunc(-3.0) + num::qfunc(3.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("qfunc_inv inverts qfunc across many decades") {
  for (double p : {0.4, 0.1, 1e-3, 1e-6, 1e-9, 1e-12}) {
    double x = num::qfunc_inv(p);
    CHECK(num::qfunc(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(num::qfunc_inv(0.5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gamma_p against known values") {
  // P(1, x) = 1 - e^{-x}
  for (double x : {0.1, 1.0, 5.0})
    CHECK(num::gamma_p(1.0, x) == doctest::Approx(-std::expm1(-x)).epsilon(1e-12));
  // P(2, x) = 1 - (1+x)e^{-x}
  CHECK(num::gamma_p(2.0, 3.0) ==
        doctest::Approx(1.0 - 4.0 * std::exp(-3.0)).epsilon(1e-12));
  // deep lower tail: P(d, x) ~ x^d / Gamma(d+1)
  double v = num::gamma_p(4.0, 0.01);
  CHECK(v == doctest::Approx(std::pow(0.01, 4) / 24.0).epsilon(1e-3));
}

TEST_CASE("adaptive quadrature on analytic integrals") {
  double v = num::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
  v = num::integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12);
  CHECK(v == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
  // narrow spike: gaussian of width 1e-3 inside a wide interval
  v = num::integrate(
      [](double x) {
        double s = 1e-3;
        return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * M_PI));
      },
      -1.0, 3.0, 1e-10);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("integrate_to_inf handles exponential tails") {
  double v = num::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0, 1e-12);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
  v = num::integrate_to_inf([](double x) { return x * std::exp(-x); }, 0.0, 1e-12);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("bisect finds bracketed roots") {
  double r = num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK_THROWS_AS(num::bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-9),
                  NumericalError);
}

TEST_CASE("golden_min locates a quadratic minimum") {
  double x = num::golden_min([](double t) { return (t - 0.7) * (t - 0.7); }, -3.0, 5.0,
                             1e-10);
  CHECK(x == doctest::Approx(0.7).epsilon(1e-6));
}

TEST_CASE("rng determinism and substream independence") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng c(42);
  Rng s1 = c.substream(1), s2 = c.substream(2);
  CHECK(s1.next_u64() != s2.next_u64());
}

TEST_CASE("rng uniform and normal moments") {
  Rng r(7);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    su += u;
    su2 += u * u;
    double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n - 0.25 == doctest::Approx(1.0 / 12).epsilon(0.03));
  CHECK(sn / n == doctest::Approx(0.0).scale(1.0).epsilon(0.02));
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("rng exponential and poisson moments") {
  Rng r(11);
  const int n = 100000;
  double se = 0;
  for (int i = 0; i < n; ++i) se += r.exponential();
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
  double sp = 0;
  for (int i = 0; i < n; ++i) sp += r.poisson(3.5);
  CHECK(sp / n == doctest::Approx(3.5).epsilon(0.03));
  // large-mean split path
  double sl = 0;
  const int m = 2000;
  for (int i = 0; i < m; ++i) sl += r.poisson(900.0);
  CHECK(sl / m == doctest::Approx(900.0).epsilon(0.01));
}
