#include "urt/numerics.hpp"

#include <cmath>
#include <limits>

#include "urt/errors.hpp"

namespace urt::num {

double qfunc(double x) { return 0.5 * std::erfc(x * 0.70710678118654752440); }

namespace {

// Acklam's rational approximation to the standard normal quantile.
double norm_inv_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  if (p > phigh) {
    q = std::sqrt(-2 * std::log(1 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}

}  // namespace

double qfunc_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("qfunc_inv: p must be in (0,1)");
  double x = -norm_inv_approx(p);
  // Newton polish on Q(x) - p; Q'(x) = -phi(x).
  for (int i = 0; i < 3; ++i) {
    double phi = std::exp(-0.5 * x * x) * 0.39894228040143267794;
    if (phi == 0.0) break;
    x += (qfunc(x) - p) / phi;
  }
  return x;
}

namespace {

double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("gamma_p: series failed to converge");
}

double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 1000; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16)
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw NumericalError("gamma_p: continued fraction failed to converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw DomainError("gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa,
             double b, double fb, double m, double fm, double whole,
             double tol, double tol_floor, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  double delta = left + right - whole;
  double local_floor = 1e-15 * (std::fabs(left) + std::fabs(right));
  if (depth <= 0 || std::fabs(delta) <= std::max(15.0 * tol, local_floor))
    return left + right + delta / 15.0;
  // never push the per-interval tolerance below roundoff on the running
  // estimate, or refinement can recurse to the depth cap everywhere
  double child = std::max(0.5 * tol, tol_floor);
  return adapt(f, a, fa, m, fm, lm, flm, left, child, tol_floor, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, child, tol_floor, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  double scale = std::max(std::fabs(whole), 1e-30);
  double tol_floor = 1e-17 * scale;
  return adapt(f, a, fa, b, fb, m, fm, whole, std::max(tol * scale, tol_floor),
               tol_floor, 60);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double tol) {
  // map t in (0,1) to x = a + t/(1-t)
  auto g = [&](double t) {
    double om = 1.0 - t;
    double x = a + t / om;
    return f(x) / (om * om);
  };
  return integrate(g, 1e-14, 1.0 - 1e-14, tol);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw NumericalError("bisect: endpoints do not bracket a root");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(1.0, std::fabs(mid))) return 0.5 * (lo + hi);
  }
  return 0.5 * (lo + hi);
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double invphi = 0.61803398874989484820;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace urt::num
