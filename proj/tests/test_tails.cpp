#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"
#include "urt/rng.hpp"
#include "urt/tails.hpp"

using namespace urt;
using namespace urt::tails;

namespace {

MomentSummary exp1_summary() {
  MomentSummary m;
  m.mean = 1.0;
  m.variance = 1.0;
  m.second_moment = 2.0;
  m.raw_moment = [](double t) { return std::tgamma(t + 1.0); };
  m.mgf = [](double t) { return 1.0 / (1.0 - t); };
  m.mgf_theta_max = 1.0;
  m.unimodal = true;
  return m;
}

}  // namespace

TEST_CASE("markov and cantelli pinned values") {
  MomentSummary m;
  m.mean = 1.0;
  CHECK(concentration_bound(BoundKind::markov_simple, m, 10.0) ==
        doctest::Approx(0.1).epsilon(1e-14));
  MomentSummary c;
  c.mean = 0.0;
  c.variance = 1.0;
  CHECK(concentration_bound(BoundKind::cantelli, c, 2.0) ==
        doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("chernoff on the unit-mean exponential") {
  auto m = exp1_summary();
  double b = concentration_bound(BoundKind::chernoff, m, 10.0);
  // oracle: 1-D minimization of e^{-tx}/(1-t) over t in [0,1)
  double t_star = num::golden_min(
      [](double t) { return std::exp(-10.0 * t) / (1.0 - t); }, 0.0, 1.0 - 1e-12,
      1e-12);
  double oracle = std::exp(-10.0 * t_star) / (1.0 - t_star);
  CHECK(oracle == doctest::Approx(10.0 * std::exp(-9.0)).epsilon(1e-8));
  CHECK(b == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(b >= std::exp(-10.0));  // still a valid upper bound on the true tail
}

TEST_CASE("all bounds dominate the true exponential tail") {
  // markov/chernoff/moment/cantelli bound P(X >= x); chebyshev and
  // vysochanskij-petunin bound the two-sided deviation P(|X - E X| >= t)
  auto m = exp1_summary();
  for (double x : {1.5, 2.0, 4.0, 8.0}) {
    double truth = std::exp(-x);
    for (BoundKind k : {BoundKind::markov_simple, BoundKind::chernoff,
                        BoundKind::moment, BoundKind::cantelli}) {
      double b = concentration_bound(k, m, x);
      CHECK(b >= truth);
      CHECK(b <= 1.0);
      CHECK(b >= 0.0);
    }
    // chernoff beats plain markov once x*x*exp(1-x) < 1 (x above ~2.35)
    if (x >= 3.0)
      CHECK(concentration_bound(BoundKind::chernoff, m, x) <=
            concentration_bound(BoundKind::markov_simple, m, x) + 1e-12);
  }
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    double two_sided = std::exp(-(1.0 + t)) +
                       (t < 1.0 ? 1.0 - std::exp(-(1.0 - t)) : 0.0);
    CHECK(concentration_bound(BoundKind::chebyshev, m, t) >= two_sided - 1e-12);
    CHECK(concentration_bound(BoundKind::vysochanskij_petunin, m, t) >=
          two_sided - 1e-12);
  }
}

TEST_CASE("bounds dominate uniform and bernoulli tails") {
  // X ~ Uniform(0,1)
  MomentSummary u;
  u.mean = 0.5;
  u.variance = 1.0 / 12.0;
  u.second_moment = 1.0 / 3.0;
  u.mgf = [](double t) { return t == 0.0 ? 1.0 : (std::exp(t) - 1.0) / t; };
  u.unimodal = true;
  for (double x : {0.6, 0.8, 0.95}) {
    double truth = 1.0 - x;
    for (BoundKind k : {BoundKind::markov_simple, BoundKind::chernoff,
                        BoundKind::cantelli})
      CHECK(concentration_bound(k, u, x) >= truth - 1e-12);
  }
  for (double t : {0.1, 0.3, 0.45}) {
    double two_sided = std::max(0.0, 1.0 - 2.0 * t);
    CHECK(concentration_bound(BoundKind::chebyshev, u, t) >= two_sided - 1e-12);
    CHECK(concentration_bound(BoundKind::vysochanskij_petunin, u, t) >=
          two_sided - 1e-12);
  }
  // X ~ Bernoulli(0.3)
  MomentSummary be;
  be.mean = 0.3;
  be.variance = 0.21;
  be.second_moment = 0.3;
  be.mgf = [](double t) { return 0.7 + 0.3 * std::exp(t); };
  for (double x : {0.5, 0.9}) {
    double truth = 0.3;  // P(X >= x) for x in (0,1]
    for (BoundKind k :
         {BoundKind::markov_simple, BoundKind::chernoff, BoundKind::cantelli})
      CHECK(concentration_bound(k, be, x) >= truth - 1e-12);
  }
  for (double t : {0.4, 0.6}) {
    double two_sided = 0.3;  // P(|X - 0.3| >= t) for t in (0.3, 0.7]
    CHECK(concentration_bound(BoundKind::chebyshev, be, t) >= two_sided - 1e-12);
  }
}

TEST_CASE("paley_zygmund lower-bounds the lower tail") {
  auto m = exp1_summary();
  for (double x : {0.0, 0.2, 0.5, 0.9}) {
    double lb = concentration_bound(BoundKind::paley_zygmund, m, x);
    double truth = std::exp(-x);  // P(X > x)
    CHECK(lb <= truth + 1e-12);
    CHECK(lb >= 0.0);
  }
  CHECK_THROWS_AS(concentration_bound(BoundKind::paley_zygmund, m, 2.0), DomainError);
}

TEST_CASE("hoeffding for sums of bounded addends") {
  // 10 iid Uniform(0,1), deviation t = 2: P(|S - 5| >= 2) <= exp(-2*4/10)
  MomentSummary h;
  h.mean = 5.0;
  h.addend_ranges.assign(10, {0.0, 1.0});
  double b = concentration_bound(BoundKind::hoeffding, h, 2.0);
  CHECK(b == doctest::Approx(std::exp(-0.8)).epsilon(1e-12));
  // MC truth stays below the bound
  Rng r(3);
  int hits = 0, n = 200000;
  for (int i = 0; i < n; ++i) {
    double s = 0;
    for (int j = 0; j < 10; ++j) s += r.uniform();
    if (std::fabs(s - 5.0) >= 2.0) ++hits;
  }
  CHECK(static_cast<double>(hits) / n <= b);
}

TEST_CASE("missing moments are capability errors") {
  MomentSummary empty;
  CHECK_THROWS_AS(concentration_bound(BoundKind::markov_simple, empty, 1.0),
                  CapabilityError);
  CHECK_THROWS_AS(concentration_bound(BoundKind::chernoff, empty, 1.0),
                  CapabilityError);
  MomentSummary no_uni;
  no_uni.mean = 0.0;
  no_uni.variance = 1.0;
  CHECK_THROWS_AS(concentration_bound(BoundKind::vysochanskij_petunin, no_uni, 3.0),
                  CapabilityError);
}

TEST_CASE("sinr outage exact: pinned value and Monte Carlo") {
  SinrNetwork net{10.0, {0.1}};
  double exact = sinr_outage_exact(net, 1.0);
  CHECK(exact == doctest::Approx(0.104121).epsilon(1e-4));
  // MC oracle over exponential fading
  Rng r(99);
  const int n = 2000000;
  int out = 0;
  for (int i = 0; i < n; ++i) {
    double s = 10.0 * r.exponential();
    double q = 1.0 + 0.1 * r.exponential();
    if (s / q < 1.0) ++out;
  }
  double mc = static_cast<double>(out) / n;
  double se = std::sqrt(mc * (1 - mc) / n);
  CHECK(std::fabs(mc - exact) < 3.0 * se);
  // no interferers reduces to the Rayleigh outage
  SinrNetwork solo{10.0, {}};
  CHECK(sinr_outage_exact(solo, 1.0) ==
        doctest::Approx(-std::expm1(-0.1)).epsilon(1e-12));
  CHECK(sinr_outage_exact(solo, 1e-300) == doctest::Approx(0.0));
}

TEST_CASE("tail approximation dominates and is tight at small thresholds") {
  SinrNetwork net{10.0, {0.1}};
  CHECK(sinr_outage_tail_approx(net, 1.0) ==
        doctest::Approx(1.0 - std::exp(-0.11)).epsilon(1e-10));
  for (double gth = 1e-6; gth <= 10.0; gth *= 10.0) {
    double ex = sinr_outage_exact(net, gth);
    double ap = sinr_outage_tail_approx(net, gth);
    CHECK(ap >= ex - 1e-15);
  }
  CHECK(sinr_outage_tail_approx(net, 1e-8) / sinr_outage_exact(net, 1e-8) ==
        doctest::Approx(1.0).epsilon(1e-6));
  // identical without interference
  SinrNetwork solo{3.0, {}};
  CHECK(sinr_outage_tail_approx(solo, 0.7) ==
        doctest::Approx(sinr_outage_exact(solo, 0.7)).epsilon(1e-14));
}

TEST_CASE("exact outage monotonicity") {
  SinrNetwork net{10.0, {0.5, 0.2}};
  double prev = 0.0;
  for (double gth = 0.1; gth < 10.0; gth *= 2.0) {
    double v = sinr_outage_exact(net, gth);
    CHECK(v >= prev);
    prev = v;
  }
  SinrNetwork stronger = net;
  stronger.mean_snr *= 2.0;
  CHECK(sinr_outage_exact(stronger, 1.0) <= sinr_outage_exact(net, 1.0));
  SinrNetwork noisier = net;
  noisier.interferer_mean_snr[0] *= 3.0;
  CHECK(sinr_outage_exact(noisier, 1.0) >= sinr_outage_exact(net, 1.0));
}

TEST_CASE("required ultra-reliable SNR") {
  auto r = required_snr_ultra_reliable(0.0, 1.0, 0.01);
  CHECK(r.exact == doctest::Approx(99.4992).epsilon(1e-4));
  CHECK(r.simplified == doctest::Approx(100.0).epsilon(1e-12));
  // the exact inversion reproduces xi through the tail form
  SinrNetwork net{r.exact, {0.0}};
  double gamma_bar_total = 0.75;
  auto r2 = required_snr_ultra_reliable(gamma_bar_total, 2.0, 1e-5);
  SinrNetwork net2{r2.exact, {gamma_bar_total}};
  CHECK(sinr_outage_tail_approx(net2, 2.0) == doctest::Approx(1e-5).epsilon(1e-9));
  // simplified/exact ratio tends to 1
  for (double xi = 1e-2; xi >= 1e-7; xi /= 10.0) {
    auto rr = required_snr_ultra_reliable(1.0, 1.0, xi);
    CHECK(rr.simplified / rr.exact == doctest::Approx(1.0).epsilon(2.0 * xi));
  }
}

TEST_CASE("markov precoder certificate on a constant channel") {
  ChannelHistory hist;
  hist.noise_power = 2.0;
  Eigen::VectorXcd h(1);
  h[0] = std::complex<double>(3.0, 4.0);  // |h|^2 = 25
  hist.entries = {h, h, h};
  Eigen::VectorXcd w(1);
  w[0] = 1.0;
  double gamma_th = 1e-3;
  // statistic = N*gamma_th/|wh|^2 = 2e-3/25 = 8e-5
  auto f = precoder_markov_feasible(hist, w, gamma_th, 1e-4);
  CHECK(f.feasible);
  CHECK(f.margin == doctest::Approx(0.8).epsilon(1e-12));
  auto g = precoder_markov_feasible(hist, w, gamma_th, 7e-5);
  CHECK(!g.feasible);
  // scaling w by c divides the statistic by c^2
  Eigen::VectorXcd w2 = 2.0 * w;
  auto f2 = precoder_markov_feasible(hist, w2, gamma_th, 1e-4);
  CHECK(f2.margin == doctest::Approx(f.margin / 4.0).epsilon(1e-12));
  // zero gain: infeasible, infinite margin, no throw
  Eigen::VectorXcd w0 = Eigen::VectorXcd::Zero(1);
  auto f0 = precoder_markov_feasible(hist, w0, gamma_th, 1e-4);
  CHECK(!f0.feasible);
  CHECK(std::isinf(f0.margin));
}

TEST_CASE("markov precoder homogeneity in channel power") {
  Rng r(5);
  ChannelHistory hist;
  hist.noise_power = 1.3;
  const int m = 4, l = 32;
  for (int i = 0; i < l; ++i) {
    Eigen::VectorXcd h(m);
    for (int j = 0; j < m; ++j)
      h[j] = std::complex<double>(r.normal(), r.normal());
    hist.entries.push_back(h);
  }
  Eigen::VectorXcd w(m);
  for (int j = 0; j < m; ++j) w[j] = std::complex<double>(r.normal(), r.normal());
  auto base = precoder_markov_feasible(hist, w, 0.05, 1e-2);
  // scale every channel by c and noise by c^2: statistic unchanged
  double c = 3.7;
  ChannelHistory scaled = hist;
  for (auto& h : scaled.entries) h *= c;
  scaled.noise_power *= c * c;
  auto same = precoder_markov_feasible(scaled, w, 0.05, 1e-2);
  CHECK(same.margin == doctest::Approx(base.margin).epsilon(1e-12));
  // confidence > 0 can only raise the statistic
  auto conf = precoder_markov_feasible(hist, w, 0.05, 1e-2, 2.0);
  CHECK(conf.margin >= base.margin);
}

TEST_CASE("markov precoder meets the true outage at large history") {
  // Rician history with a weak LOS: certify at xi = 1e-3, check by fresh-draw MC
  const int m = 4, l = 256;
  const double k_factor = 0.1, gamma_th = 0.05, xi = 1e-3;
  Rng r(21);
  auto draw = [&](Rng& rng) {
    Eigen::VectorXcd los(m), scat(m);
    for (int j = 0; j < m; ++j) {
      double ph = 2.0 * M_PI * j / m;
      los[j] = std::complex<double>(std::cos(ph), std::sin(ph));
      scat[j] = std::complex<double>(rng.normal(), rng.normal()) * std::sqrt(0.5);
    }
    return (std::sqrt(k_factor / (1 + k_factor)) * los +
            std::sqrt(1.0 / (1 + k_factor)) * scat)
        .eval();
  };
  ChannelHistory hist;
  for (int i = 0; i < l; ++i) hist.entries.push_back(draw(r));
  Eigen::VectorXcd dir = draw(r).normalized();
  // minimum certified power: statistic scales linearly with 1/power
  double unit_stat = precoder_markov_feasible(hist, dir, gamma_th, xi).margin * xi;
  double power = unit_stat / xi * (1.0 + 1e-9);  // tiny headroom off the boundary
  Eigen::VectorXcd w = std::sqrt(power) * dir;
  CHECK(precoder_markov_feasible(hist, w, gamma_th, xi).feasible);
  int out = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    auto h = draw(r);
    if (std::norm(w.dot(h)) < gamma_th) ++out;
  }
  CHECK(static_cast<double>(out) / n <= xi);
}
