#include "urt/fbl.hpp"

#include <cmath>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::fbl {

namespace {
const double kLog2eSq = 2.0813689810056077;  // log2(e)^2
}

double capacity(double gamma) {
  if (gamma < 0) throw DomainError("capacity: gamma must be >= 0");
  return std::log2(1.0 + gamma);
}

double dispersion(double gamma) {
  if (gamma < 0) throw DomainError("dispersion: gamma must be >= 0");
  double g1 = 1.0 + gamma;
  return gamma * (2.0 + gamma) / (g1 * g1) * kLog2eSq;
}

MaxRate max_rate(int n, double eps, double gamma, bool correction) {
  if (n < 1) throw DomainError("max_rate: n must be >= 1");
  if (eps <= 0 || eps >= 1) throw DomainError("max_rate: eps must be in (0,1)");
  double r = capacity(gamma) - std::sqrt(dispersion(gamma) / n) * num::qfunc_inv(eps);
  if (correction) r += std::log2(static_cast<double>(n)) / (2.0 * n);
  if (r < 0) return {0.0, true};
  return {r, false};
}

double error_prob(int n, double k, double gamma) {
  if (n < 1 || k <= 0) throw DomainError("error_prob: need n >= 1, k > 0");
  if (gamma <= 0) return 1.0;
  double v = dispersion(gamma);
  return num::qfunc((capacity(gamma) - k / n) / std::sqrt(v / n));
}

RequiredSnr required_snr(double k, int n, double eps) {
  if (n < 1 || k <= 0) throw DomainError("required_snr: need n >= 1, k > 0");
  if (eps <= 0) throw DomainError("required_snr: eps must be positive");
  if (eps >= 0.5)
    throw CapabilityError(
        "required_snr: eps >= 0.5 is the degenerate regime; use 2^(k/n) - 1");
  const double r = k / n;
  const double qinv = num::qfunc_inv(eps);
  const double rn = std::sqrt((double)n);
  auto step = [&](double x) {
    return std::exp2(r + std::sqrt(dispersion(x)) * qinv / rn) - 1.0;
  };
  // Steffensen-accelerated fixed point, started from the high-SNR dispersion
  // limit; quadratic convergence keeps the count in single digits
  double gamma = std::exp2(r + std::sqrt(kLog2eSq) * qinv / rn) - 1.0;
  for (int it = 1; it <= 200; ++it) {
    double g1 = step(gamma);
    if (std::fabs(g1 - gamma) <= 1e-9 * gamma) return {g1, it};
    double g2 = step(g1);
    double den = g2 - 2.0 * g1 + gamma;
    double next = den != 0 ? gamma - (g1 - gamma) * (g1 - gamma) / den : g2;
    if (next <= 0 || !std::isfinite(next)) next = g2;
    if (std::fabs(next - gamma) <= 1e-9 * gamma) return {next, it};
    gamma = next;
  }
  throw NumericalError("required_snr: fixed point did not converge");
}

SnrPenalty snr_penalty(double r, int n, double eps) {
  if (r <= 0) throw DomainError("snr_penalty: rate must be positive");
  SnrPenalty p;
  double asymptotic = std::exp2(r) - 1.0;
  // at eps = 1/2 the dispersion term vanishes and the required SNR is exactly
  // the asymptotic threshold
  p.delta = eps == 0.5 ? 1.0 : required_snr(r * n, n, eps).gamma / asymptotic;
  p.delta0 = std::exp(num::qfunc_inv(eps) / std::sqrt((double)n));
  return p;
}

namespace {

// SNR density under the fading model (linear SNR domain)
double snr_pdf(const FadingSpec& f, double g) {
  if (g <= 0) return 0.0;
  switch (f.family) {
    case FadingSpec::Family::rayleigh:
      return std::exp(-g / f.mean_snr) / f.mean_snr;
    case FadingSpec::Family::rician: {
      double kf = f.los_factor;
      double a = (1.0 + kf) / f.mean_snr;
      double arg = 2.0 * std::sqrt(kf * (1.0 + kf) * g / f.mean_snr);
      // log-domain to keep the Bessel factor finite at strong LOS
      double log_i0 = arg < 650.0
                          ? std::log(std::cyl_bessel_i(0.0, arg))
                          : arg - 0.5 * std::log(2.0 * M_PI * arg);
      return a * std::exp(-kf - a * g + log_i0);
    }
  }
  throw DomainError("avg_error_fading: unknown fading family");
}

double snr_cdf(const FadingSpec& f, double g) {
  if (g <= 0) return 0.0;
  switch (f.family) {
    case FadingSpec::Family::rayleigh:
      return -std::expm1(-g / f.mean_snr);
    case FadingSpec::Family::rician:
      return num::integrate(
          [&](double x) { return snr_pdf(f, x); }, 0.0, g, 1e-11);
  }
  throw DomainError("avg_error_fading: unknown fading family");
}

}  // namespace

double avg_error_fading(const FadingSpec& fading, double k, int n, FadingMethod method) {
  if (fading.mean_snr <= 0) throw DomainError("avg_error_fading: mean_snr must be > 0");
  if (n < 1 || k <= 0) throw DomainError("avg_error_fading: need n >= 1, k > 0");
  const double g_th = std::exp2(k / n) - 1.0;
  if (method == FadingMethod::asymptotic_outage) return snr_cdf(fading, g_th);
  // average the conditional error over the SNR density, in log space
  auto integrand = [&](double t) {
    double g = std::exp(t);
    return error_prob(n, k, g) * snr_pdf(fading, g) * g;
  };
  double center = std::log(fading.mean_snr);
  double val = num::integrate(integrand, center - 34.0, center + 6.0, 1e-11);
  if (!(val >= 0.0) || val > 1.0 + 1e-9)
    throw NumericalError("avg_error_fading: quadrature out of range");
  return std::min(1.0, std::max(0.0, val));
}

double success_with_metadata(double p_em, double p_ed, double p_ef, int n) {
  for (double p : {p_em, p_ed, p_ef})
    if (p < 0 || p > 1) throw DomainError("success_with_metadata: probabilities in [0,1]");
  if (n < 0) throw DomainError("success_with_metadata: n must be >= 0");
  const double single = (1.0 - p_em) * (1.0 - p_ed);
  double p_s = single;
  double retry_path = 1.0;  // probability all earlier rounds failed with feedback
  for (int j = 1; j <= n; ++j) {
    retry_path *= (1.0 - p_em) * p_ed * (1.0 - p_ef);
    p_s += retry_path * single;
  }
  return p_s;
}

}  // namespace urt::fbl
