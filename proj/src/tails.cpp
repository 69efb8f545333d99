#include "urt/tails.hpp"

#include <algorithm>
#include <cmath>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::tails {

namespace {

double clip01(double v) { return std::min(1.0, std::max(0.0, v)); }

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw CapabilityError(std::string("concentration_bound: missing ") + what);
  return *v;
}

// minimize ln MGF(theta) - theta*x over theta in (0, theta_max); the
// objective is convex, so a coarse grid plus golden refinement suffices.
double chernoff(const MomentSummary& info, double x) {
  if (!info.mgf) throw CapabilityError("concentration_bound: missing mgf");
  double cap = std::min(info.mgf_theta_max, 1e9);
  auto obj = [&](double theta) {
    double m = info.mgf(theta);
    if (!(m > 0.0) || !std::isfinite(m)) return std::numeric_limits<double>::infinity();
    return std::log(m) - theta * x;
  };
  // log-spaced grid to bracket the optimum
  const int n = 240;
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) {
    double t = std::pow(10.0, -9.0 + (std::log10(cap * (1.0 - 1e-12)) + 9.0) * i / (n - 1.0));
    grid[i] = t;
    double v = obj(t);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  if (best_i < 0) return 1.0;
  double lo = grid[std::max(0, best_i - 1)];
  double hi = grid[std::min(n - 1, best_i + 1)];
  double theta = num::golden_min(obj, lo, hi, 1e-12);
  return std::exp(std::min(best, obj(theta)));
}

double moment_bound(const MomentSummary& info, double x) {
  if (!info.raw_moment) throw CapabilityError("concentration_bound: missing raw_moment");
  if (x <= 0) return 1.0;
  auto obj = [&](double theta) {
    double m = info.raw_moment(theta);
    if (!(m > 0.0) || !std::isfinite(m)) return std::numeric_limits<double>::infinity();
    return std::log(m) - theta * std::log(x);
  };
  if (info.moment_order >= 1.0) return std::exp(obj(info.moment_order));
  double best = obj(1.0);
  int best_i = 0;
  for (int i = 1; i <= 200; ++i) {
    double v = obj(1.0 + i * 0.25);
    if (v < best) {
      best = v;
      best_i = i;
    }
  }
  double theta = num::golden_min(obj, 1.0 + std::max(0, best_i - 1) * 0.25,
                                 1.0 + (best_i + 1) * 0.25, 1e-10);
  return std::exp(std::min(best, obj(theta)));
}

}  // namespace

double concentration_bound(BoundKind kind, const MomentSummary& info, double x) {
  if (x <= 0 && kind != BoundKind::paley_zygmund)
    throw DomainError("concentration_bound: threshold must be positive");
  switch (kind) {
    case BoundKind::markov_simple:
      return clip01(need(info.mean, "mean") / x);
    case BoundKind::chebyshev:
      // deviation form: P(|X - E X| >= x) <= V / x^2
      return clip01(need(info.variance, "variance") / (x * x));
    case BoundKind::chernoff:
      return clip01(chernoff(info, x));
    case BoundKind::moment:
      return clip01(moment_bound(info, x));
    case BoundKind::cantelli: {
      double m = need(info.mean, "mean"), v = need(info.variance, "variance");
      if (x <= m) return 1.0;
      double d = x - m;
      return clip01(v / (v + d * d));
    }
    case BoundKind::paley_zygmund: {
      double m = need(info.mean, "mean");
      double m2 = info.second_moment
                      ? *info.second_moment
                      : (info.variance ? *info.variance + m * m
                                       : throw CapabilityError(
                                             "concentration_bound: missing second moment"));
      if (x < 0 || x >= m)
        throw DomainError("concentration_bound: paley_zygmund needs 0 <= x < mean");
      double d = m - x;
      return clip01(d * d / m2);  // lower bound on P(X > x)
    }
    case BoundKind::vysochanskij_petunin: {
      if (!info.unimodal)
        throw CapabilityError("concentration_bound: vysochanskij_petunin needs unimodality");
      double v = need(info.variance, "variance");
      // deviation form around the mean
      if (x * x >= (8.0 / 3.0) * v) return clip01(4.0 * v / (9.0 * x * x));
      return clip01(4.0 * v / (3.0 * x * x) - 1.0 / 3.0);
    }
    case BoundKind::hoeffding: {
      if (info.addend_ranges.empty())
        throw CapabilityError("concentration_bound: missing addend ranges");
      double s = 0.0;
      for (auto& [a, b] : info.addend_ranges) {
        if (b < a) throw DomainError("concentration_bound: addend range with b < a");
        s += (b - a) * (b - a);
      }
      if (s <= 0) throw DomainError("concentration_bound: degenerate addend ranges");
      return clip01(std::exp(-2.0 * x * x / s));
    }
  }
  throw DomainError("concentration_bound: unknown bound kind");
}

double sinr_outage_exact(const SinrNetwork& net, double gamma_th) {
  if (net.mean_snr <= 0 || gamma_th <= 0)
    throw DomainError("sinr_outage_exact: powers must be positive");
  double log_succ = -gamma_th / net.mean_snr;
  for (double gk : net.interferer_mean_snr) {
    if (gk < 0) throw DomainError("sinr_outage_exact: negative interferer power");
    log_succ -= std::log1p(gk / net.mean_snr * gamma_th);
  }
  return -std::expm1(log_succ);
}

double sinr_outage_tail_approx(const SinrNetwork& net, double gamma_th) {
  if (net.mean_snr <= 0 || gamma_th <= 0)
    throw DomainError("sinr_outage_tail_approx: powers must be positive");
  double denom = 1.0;
  for (double gk : net.interferer_mean_snr) denom += gk;
  double ups = net.mean_snr / denom;
  return -std::expm1(-gamma_th / ups);
}

RequiredSnr required_snr_ultra_reliable(double gamma_bar, double gamma_th, double xi) {
  if (gamma_bar < 0 || gamma_th <= 0)
    throw DomainError("required_snr_ultra_reliable: invalid powers");
  if (xi <= 0 || xi >= 1)
    throw DomainError("required_snr_ultra_reliable: xi must be in (0,1)");
  RequiredSnr r;
  r.exact = -(1.0 + gamma_bar) * gamma_th / std::log1p(-xi);
  r.simplified = (1.0 + gamma_bar) * gamma_th / xi;
  return r;
}

Feasibility precoder_markov_feasible(const ChannelHistory& hist,
                                     const Eigen::VectorXcd& w, double gamma_th,
                                     double xi, double confidence) {
  if (hist.entries.empty())
    throw CapabilityError("precoder_markov_feasible: empty channel history");
  if (xi <= 0 || xi >= 1) throw DomainError("precoder_markov_feasible: xi in (0,1)");
  if (hist.noise_power <= 0)
    throw DomainError("precoder_markov_feasible: noise power must be positive");
  double sum = 0.0, sumsq = 0.0;
  for (const auto& h : hist.entries) {
    if (h.size() != w.size())
      throw DomainError("precoder_markov_feasible: dimension mismatch");
    double g = std::norm(w.dot(h));  // |w^H h|^2 (Eigen's dot conjugates w)
    if (g <= 0.0) return {false, std::numeric_limits<double>::infinity()};
    double term = hist.noise_power * gamma_th / g;
    sum += term;
    sumsq += term * term;
  }
  double l = static_cast<double>(hist.entries.size());
  double mean = sum / l;
  double bound = mean;
  if (confidence > 0.0) {
    double var = std::max(0.0, sumsq / l - mean * mean);
    bound += confidence * std::sqrt(var / l);
  }
  return {bound <= xi, bound / xi};
}

}  // namespace urt::tails
