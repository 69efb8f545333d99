#include "urt/evt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::evt {

double gev_cdf(const GevParams& p, double z) {
  if (p.scale <= 0) throw DomainError("gev_cdf: scale must be positive");
  double s = (z - p.location) / p.scale;
  if (std::fabs(p.shape) < 1e-8) return std::exp(-std::exp(-s));
  double t = 1.0 + p.shape * s;
  if (t <= 0.0) return p.shape > 0 ? 0.0 : 1.0;
  return std::exp(-std::pow(t, -1.0 / p.shape));
}

namespace {

constexpr int kMinExceedances = 30;

// negative log-likelihood of GPD(kappa, sigma) for excesses y
double gpd_nll(const std::vector<double>& y, double kappa, double sigma) {
  if (sigma <= 0) return std::numeric_limits<double>::infinity();
  double nll = y.size() * std::log(sigma);
  if (std::fabs(kappa) < 1e-12) {
    for (double yi : y) nll += yi / sigma;
    return nll;
  }
  for (double yi : y) {
    double t = 1.0 + kappa * yi / sigma;
    if (t <= 0) return std::numeric_limits<double>::infinity();
    nll += (1.0 + 1.0 / kappa) * std::log(t);
  }
  return nll;
}

}  // namespace

GpdFit gpd_fit(std::vector<double> samples, double rho, double ci_level) {
  if (rho <= 0 || rho >= 1) throw DomainError("gpd_fit: rho must be in (0,1)");
  if (ci_level <= 0 || ci_level >= 1) throw DomainError("gpd_fit: ci_level in (0,1)");
  const int m = static_cast<int>(samples.size());
  const int k = static_cast<int>(std::lround(rho * m));
  if (k < kMinExceedances || k >= m)
    throw DomainError("gpd_fit: too few exceedances for a stable tail fit");
  std::sort(samples.begin(), samples.end());
  const double u = samples[m - k - 1];
  std::vector<double> y(k);
  double ymax = 0.0, ybar = 0.0;
  for (int i = 0; i < k; ++i) {
    y[i] = samples[m - k + i] - u;
    if (y[i] <= 0) throw CapabilityError("gpd_fit: ties at the threshold");
    ymax = std::max(ymax, y[i]);
    ybar += y[i];
  }
  ybar /= k;

  // profile likelihood over eta = kappa / sigma (Grimshaw reduction):
  // kappa(eta) = mean ln(1 + eta y_i), per-sample objective
  // l(eta) = ln(kappa/eta) + kappa  (+1, dropped), minimized.
  auto kappa_of = [&](double eta) {
    double s = 0.0;
    for (double yi : y) s += std::log1p(eta * yi);
    return s / k;
  };
  auto obj = [&](double eta) {
    if (eta == 0.0) return std::log(ybar);  // exponential limit
    double kap = kappa_of(eta);
    double ratio = kap / eta;
    if (!(ratio > 0)) return std::numeric_limits<double>::infinity();
    return std::log(ratio) + kap;
  };

  std::vector<double> etas;
  etas.push_back(0.0);
  for (int i = 0; i <= 220; ++i) {
    double mag = std::pow(10.0, -8.0 + 12.0 * i / 220.0) / ybar;
    etas.push_back(mag);
    double neg = -mag;
    if (neg > -1.0 / ymax * (1.0 - 1e-10)) etas.push_back(neg);
  }
  std::sort(etas.begin(), etas.end());
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < (int)etas.size(); ++i) {
    double v = obj(etas[i]);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double lo = etas[std::max(0, best_i - 1)];
  double hi = etas[std::min((int)etas.size() - 1, best_i + 1)];
  double eta = num::golden_min(obj, lo, hi, 1e-13);
  if (obj(eta) > best) eta = etas[best_i];

  double kappa, sigma;
  if (std::fabs(eta) * ybar < 1e-9) {
    kappa = 0.0;
    sigma = ybar;
  } else {
    kappa = kappa_of(eta);
    sigma = kappa / eta;
  }

  // standard errors from the numeric observed information
  double hk = std::max(1e-6, std::fabs(kappa) * 1e-4);
  double hs = sigma * 1e-4;
  auto f = [&](double dk, double ds) { return gpd_nll(y, kappa + dk, sigma + ds); };
  double f00 = f(0, 0);
  double dkk = (f(hk, 0) - 2 * f00 + f(-hk, 0)) / (hk * hk);
  double dss = (f(0, hs) - 2 * f00 + f(0, -hs)) / (hs * hs);
  double dks = (f(hk, hs) - f(hk, -hs) - f(-hk, hs) + f(-hk, -hs)) / (4 * hk * hs);
  double det = dkk * dss - dks * dks;
  double var_k, var_s;
  if (std::isfinite(det) && det > 0 && dkk > 0) {
    var_k = dss / det;
    var_s = dkk / det;
  } else if (kappa < 0.5) {
    // near the support boundary (strongly negative shape) the finite
    // differences cross into infeasible parameters; fall back to the
    // asymptotic covariance of the maximum-likelihood estimator
    var_k = (1.0 - kappa) * (1.0 - kappa) / k;
    var_s = 2.0 * (1.0 - kappa) * sigma * sigma / k;
  } else {
    throw NumericalError("gpd_fit: observed information not positive definite");
  }

  GpdFit fit;
  fit.threshold = u;
  fit.exceedance_fraction = static_cast<double>(k) / m;
  fit.shape = kappa;
  fit.scale = sigma;
  fit.shape_se = std::sqrt(var_k);
  fit.scale_se = std::sqrt(var_s);
  double z = num::qfunc_inv(0.5 * (1.0 - ci_level));
  fit.shape_ci = {kappa - z * fit.shape_se, kappa + z * fit.shape_se};
  fit.scale_ci = {sigma - z * fit.scale_se, sigma + z * fit.scale_se};
  fit.ci_level = ci_level;
  fit.n_exceedances = k;
  return fit;
}

namespace {

// conditional survival of the excess beyond the threshold
double gpd_excess_sf(double kappa, double sigma, double z) {
  if (z <= 0) return 1.0;
  if (sigma <= 0) return 0.0;
  if (std::fabs(kappa) < 1e-8) return std::exp(-z / sigma);
  double t = 1.0 + kappa * z / sigma;
  if (t <= 0) return 0.0;  // beyond the upper endpoint (kappa < 0)
  return std::pow(t, -1.0 / kappa);
}

}  // namespace

double gpd_tail_prob(const GpdFit& fit, double x) {
  if (x < fit.threshold)
    throw DomainError("gpd_tail_prob: x below the fitted threshold");
  return fit.exceedance_fraction * gpd_excess_sf(fit.shape, fit.scale, x - fit.threshold);
}

double hill_tail_index(std::vector<double> samples, int k) {
  const int n = static_cast<int>(samples.size());
  if (k < 1 || k >= n) throw DomainError("hill_tail_index: need 1 <= k < n");
  std::sort(samples.begin(), samples.end());
  if (samples[n - k - 1] <= 0)
    throw DomainError("hill_tail_index: order statistics must be positive");
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += std::log(samples[n - 1 - i] / samples[n - k - 1]);
  return s / k;
}

EvtCertificate precoder_evt_feasible(const tails::ChannelHistory& hist,
                                     const Eigen::VectorXcd& w, double gamma_th,
                                     double xi, double rho, double ci_level,
                                     const std::function<double(double)>& transform) {
  if (xi <= 0 || xi >= 1) throw DomainError("precoder_evt_feasible: xi in (0,1)");
  if (rho <= xi) throw DomainError("precoder_evt_feasible: need rho > xi");
  if (hist.noise_power <= 0)
    throw DomainError("precoder_evt_feasible: noise power must be positive");
  std::function<double(double)> f =
      transform ? transform : [](double x) { return std::log1p(x); };
  std::vector<double> theta;
  theta.reserve(hist.entries.size());
  for (const auto& h : hist.entries) {
    if (h.size() != w.size())
      throw DomainError("precoder_evt_feasible: dimension mismatch");
    double g = std::norm(w.dot(h));
    if (g <= 0.0)
      throw NumericalError("precoder_evt_feasible: zero beamformed gain sample");
    theta.push_back(f(hist.noise_power / g));
  }
  EvtCertificate cert;
  cert.target = f(1.0 / gamma_th);
  cert.fit = gpd_fit(theta, rho, ci_level);
  const double budget = xi / cert.fit.exceedance_fraction;
  if (cert.fit.threshold >= cert.target) {
    // the observed tail already reaches past the feasibility point
    cert.worst_tail_prob = 1.0;
    cert.feasible = false;
    return cert;
  }
  double z = cert.target - cert.fit.threshold;
  double worst = 0.0;
  const auto& [klo, khi] = cert.fit.shape_ci;
  for (int i = 0; i <= 100; ++i) {
    double kap = klo + (khi - klo) * i / 100.0;
    for (double sig : {cert.fit.scale_ci.first, cert.fit.scale_ci.second}) {
      if (sig <= 0) sig = 1e-12;
      worst = std::max(worst, gpd_excess_sf(kap, sig, z));
    }
  }
  cert.worst_tail_prob = worst;
  cert.feasible = worst <= budget;
  return cert;
}

}  // namespace urt::evt
