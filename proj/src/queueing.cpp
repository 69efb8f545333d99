#include "urt/queueing.hpp"

#include <cmath>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::queueing {

double delay_outage(const QosModel& model, double delta_max) {
  if (model.theta <= 0 || model.c_e < 0) throw DomainError("delay_outage: invalid model");
  if (delta_max < 0) throw DomainError("delay_outage: delta_max must be >= 0");
  return std::exp(-model.theta * model.c_e * delta_max);
}

double effcap_fixed_rate(double r, double eps, double theta, int n) {
  if (eps < 0 || eps > 1) throw DomainError("effcap_fixed_rate: eps in [0,1]");
  if (theta <= 0 || n < 1 || r < 0) throw DomainError("effcap_fixed_rate: invalid inputs");
  if (eps >= 1.0) return 0.0;
  if (eps == 0.0) return r;
  double tn = theta * n;
  // log-sum-exp form of ln(eps + (1-eps)e^{-tnr}) stays finite for any theta
  double a = std::log(eps), b = std::log1p(-eps) - tn * r;
  double m = std::max(a, b);
  return -(m + std::log(std::exp(a - m) + std::exp(b - m))) / tn;
}

double rayleigh_outage(double r, double rho) {
  if (r < 0 || rho <= 0) throw DomainError("rayleigh_outage: invalid inputs");
  return -std::expm1(-(std::exp2(r) - 1.0) / rho);
}

std::vector<TradeoffPoint> availability_latency_power(
    double c_e_target, int n, double r, const std::vector<double>& rho_grid,
    const std::vector<double>& delta_grid) {
  if (rho_grid.empty() || delta_grid.empty())
    throw DomainError("availability_latency_power: empty grid");
  if (!(c_e_target > 0 && c_e_target < r))
    throw DomainError("availability_latency_power: need 0 < C_e target < r");
  std::vector<TradeoffPoint> out;
  out.reserve(rho_grid.size() * delta_grid.size());
  for (double rho : rho_grid) {
    double eps = rayleigh_outage(r, rho);
    bool saturated = eps == 0.0;
    bool feasible = true;
    double theta = 0.0;
    if (!saturated) {
      // effcap is monotone decreasing in theta from (1-eps)r towards 0
      auto f = [&](double log10t) {
        return effcap_fixed_rate(r, eps, std::pow(10.0, log10t), n) - c_e_target;
      };
      if (f(-6.0) < 0.0)
        feasible = false;  // even the laxest exponent cannot reach the target
      else if (f(3.0) > 0.0)
        theta = 1e3;  // target met deep into the stringent regime
      else
        theta = std::pow(10.0, num::bisect(f, -6.0, 3.0, 1e-12));
    }
    for (double d : delta_grid) {
      TradeoffPoint p;
      p.delta_max = d;
      p.rho = rho;
      p.saturated = saturated;
      p.feasible = feasible || saturated;
      p.theta = theta;
      if (saturated)
        p.availability = 1.0;
      else if (!feasible)
        p.availability = 0.0;
      else
        p.availability = -std::expm1(-theta * c_e_target * d);
      out.push_back(p);
    }
  }
  return out;
}

double effective_bandwidth_onoff(const OnOffSource& src, double theta) {
  if (src.s <= 0 || src.s > 1 || src.r <= 0)
    throw DomainError("effective_bandwidth_onoff: invalid source");
  if (theta <= 0) throw DomainError("effective_bandwidth_onoff: theta must be > 0");
  return std::log1p(src.s * std::expm1(src.r * theta)) / theta;
}

std::optional<double> max_arrival_rate(double s, double theta, double c_e) {
  if (s <= 0 || s > 1 || theta <= 0 || c_e < 0)
    throw DomainError("max_arrival_rate: invalid inputs");
  double num = std::exp(theta * c_e) - (1.0 - s);
  if (num <= 0) return std::nullopt;
  return s / theta * std::log(num / s);
}

double snc_delay_violation(const SncEnvelope& arrival, const SncEnvelope& service,
                           double w) {
  if (arrival.theta != service.theta || arrival.theta <= 0)
    throw DomainError("snc_delay_violation: envelopes must share a positive theta");
  if (w < 0) throw DomainError("snc_delay_violation: w must be >= 0");
  if (arrival.rate >= service.rate)
    throw DomainError("snc_delay_violation: unstable (arrival rate >= service rate)");
  double th = arrival.theta;
  double bound = std::exp(th * (arrival.burst + service.burst) - th * service.rate * w) /
                 -std::expm1(th * (arrival.rate - service.rate));
  return std::min(1.0, bound);
}

double peak_aoi(const AoiModel& m) {
  if (m.lambda <= 0 || m.mu <= 0) throw DomainError("peak_aoi: rates must be positive");
  const bool general = m.kind == AoiModel::Kind::mg1 || m.kind == AoiModel::Kind::mg11;
  double es = 1.0 / m.mu, es2 = 2.0 * es * es;  // exponential-service defaults
  if (general) {
    if (m.service_moments.size() != 2)
      throw CapabilityError("peak_aoi: general-service kinds need (E[S], E[S^2])");
    es = m.service_moments[0];
    es2 = m.service_moments[1];
    if (es <= 0 || es2 < es * es) throw DomainError("peak_aoi: invalid service moments");
  }
  const double mu = general ? 1.0 / es : m.mu;
  const double rho_o = m.lambda / mu;
  switch (m.kind) {
    case AoiModel::Kind::mm1:
      if (rho_o >= 1) throw DomainError("peak_aoi: unstable queue (rho_o >= 1)");
      return (1.0 + 1.0 / rho_o + rho_o / (1.0 - rho_o)) / mu;
    case AoiModel::Kind::mg1:
      if (rho_o >= 1) throw DomainError("peak_aoi: unstable queue (rho_o >= 1)");
      return 1.0 / m.lambda + es + m.lambda * es2 / (2.0 * (1.0 - rho_o));
    case AoiModel::Kind::mg11:
      return es + rho_o * (1.0 + 1.0 / m.lambda);
    case AoiModel::Kind::mm11:
      return 1.0 / m.lambda + 2.0 / m.mu;
    case AoiModel::Kind::mm12:
      return 3.0 / m.mu + 1.0 / m.lambda + 2.0 / (m.lambda + m.mu);
    case AoiModel::Kind::lcfs_preempt:
      throw CapabilityError("peak_aoi: no closed peak-age form for LCFS-preempt here");
  }
  throw DomainError("peak_aoi: unknown queue kind");
}

double jit_peak_aoi(const std::vector<double>& service_times) {
  if (service_times.size() < 2) throw DomainError("jit_peak_aoi: need >= 2 service times");
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < service_times.size(); ++i)
    s += service_times[i] + service_times[i + 1];
  return s / (service_times.size() - 1);
}

double age_survival_lcfs(double lambda, double mu, double t) {
  if (lambda <= 0 || mu <= 0) throw DomainError("age_survival_lcfs: rates must be positive");
  if (t < 0) throw DomainError("age_survival_lcfs: t must be >= 0");
  if (std::fabs(lambda - mu) < 1e-9 * mu) return (lambda * t + 1.0) * std::exp(-lambda * t);
  return (lambda * std::exp(-mu * t) - mu * std::exp(-lambda * t)) / (lambda - mu);
}

}  // namespace urt::queueing
