#include "urt/dependability.hpp"

#include <cmath>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::dep {

TwoStateMarkov gilbert_elliot_rates(double gamma_th, double gamma_bar, double f_d) {
  if (gamma_th <= 0 || gamma_bar <= 0 || f_d <= 0)
    throw DomainError("gilbert_elliot_rates: parameters must be positive");
  double ratio = gamma_th / gamma_bar;
  double lambda = std::sqrt(2.0 * M_PI * ratio) * f_d;
  double mu = lambda / std::expm1(ratio);
  return {lambda, mu};
}

DependabilitySummary steady_quantities(const TwoStateMarkov& m) {
  if (m.failure_rate <= 0 || m.repair_rate <= 0)
    throw DomainError("steady_quantities: rates must be positive");
  DependabilitySummary s;
  s.availability = m.repair_rate / (m.failure_rate + m.repair_rate);
  s.mttf = 1.0 / m.failure_rate;
  s.mut = s.mttf;
  s.mdt = 1.0 / m.repair_rate;
  return s;
}

double reliability_at(const TwoStateMarkov& m, double t) {
  if (t < 0) throw DomainError("reliability_at: t must be >= 0");
  return std::exp(-m.failure_rate * t);
}

StructureSpec StructureSpec::series(int n) {
  StructureSpec s;
  s.kind = Kind::series;
  s.n = n;
  return s;
}

StructureSpec StructureSpec::parallel(int n) {
  StructureSpec s;
  s.kind = Kind::parallel;
  s.n = n;
  return s;
}

StructureSpec StructureSpec::k_out_of_n(int k, int n) {
  StructureSpec s;
  s.kind = Kind::k_out_of_n;
  s.n = n;
  s.k = k;
  return s;
}

StructureSpec StructureSpec::explicit_table(int n, std::function<bool(std::uint32_t)> fn) {
  StructureSpec s;
  s.kind = Kind::explicit_table;
  s.n = n;
  s.structure = std::move(fn);
  return s;
}

double structure_availability(const StructureSpec& s, const std::vector<double>& p) {
  if ((int)p.size() != s.n || s.n <= 0)
    throw DomainError("structure_availability: need one availability per component");
  for (double pi : p)
    if (pi < 0.0 || pi > 1.0)
      throw DomainError("structure_availability: availabilities must be in [0,1]");
  switch (s.kind) {
    case StructureSpec::Kind::series: {
      double a = 1.0;
      for (double pi : p) a *= pi;
      return a;
    }
    case StructureSpec::Kind::parallel: {
      double a = 1.0;
      for (double pi : p) a *= 1.0 - pi;
      return 1.0 - a;
    }
    case StructureSpec::Kind::k_out_of_n: {
      if (s.k < 0 || s.k > s.n)
        throw DomainError("structure_availability: need 0 <= k <= n");
      // dp[j] = P(exactly j of the first i components up); exact for
      // heterogeneous p and reduces to the binomial sum when p is constant.
      std::vector<double> dp(s.n + 1, 0.0);
      dp[0] = 1.0;
      for (int i = 0; i < s.n; ++i)
        for (int j = i + 1; j >= 0; --j)
          dp[j] = (j > 0 ? dp[j - 1] * p[i] : 0.0) + dp[j] * (1.0 - p[i]);
      double a = 0.0;
      for (int j = s.k; j <= s.n; ++j) a += dp[j];
      return a;
    }
    case StructureSpec::Kind::explicit_table: {
      if (s.n > 25)
        throw CapabilityError("structure_availability: enumeration limited to n <= 25");
      if (!s.structure)
        throw DomainError("structure_availability: missing structure function");
      double a = 0.0;
      for (std::uint32_t mask = 0; mask < (1u << s.n); ++mask) {
        if (!s.structure(mask)) continue;
        double w = 1.0;
        for (int i = 0; i < s.n; ++i) w *= (mask >> i) & 1u ? p[i] : 1.0 - p[i];
        a += w;
      }
      return a;
    }
  }
  throw DomainError("structure_availability: unknown structure kind");
}

namespace {

double mdo_bound_raw(double f, double burst_duration_s, double doppler_hz) {
  return std::sqrt(2.0 * f / M_PI) * (std::cosh(1.0 / f) - 1.0) /
         (burst_duration_s * doppler_hz);
}

}  // namespace

double mdo_probability_bound(const TwoStateMarkov& m, double burst_duration_s,
                             double doppler_hz, double f) {
  if (f <= 0 || burst_duration_s <= 0 || doppler_hz <= 0)
    throw DomainError("mdo_probability_bound: parameters must be positive");
  if (m.repair_rate <= 0 || 1.0 / m.repair_rate >= burst_duration_s)
    throw CapabilityError(
        "mdo_probability_bound: invalid regime (mean down time exceeds the "
        "tolerable burst); fall back to the outage-only margin");
  return mdo_bound_raw(f, burst_duration_s, doppler_hz);
}

MdoMargin mdo_margin(const MdoProblem& p) {
  if (p.xi <= 0) throw DomainError("mdo_margin: xi must be positive");
  if (p.xi >= 2e-3)
    throw CapabilityError(
        "mdo_margin: the bound is only valid for xi < 2e-3; fall back to the "
        "outage-only margin");
  if (p.burst_duration_s <= 0 || p.doppler_hz <= 0)
    throw DomainError("mdo_margin: parameters must be positive");
  auto g = [&](double log10f) {
    return mdo_bound_raw(std::pow(10.0, log10f), p.burst_duration_s, p.doppler_hz) -
           p.xi;
  };
  // the bound decreases in f; search margins from 0 to 120 dB
  if (g(0.0) < 0.0)
    throw CapabilityError("mdo_margin: target met with no margin (xi too large)");
  if (g(12.0) > 0.0) throw CapabilityError("mdo_margin: margin above 120 dB required");
  MdoMargin m;
  m.margin = std::pow(10.0, num::bisect(g, 0.0, 12.0, 1e-10));
  double d = p.burst_duration_s * p.doppler_hz;
  m.margin_closed_form = std::pow(2.0 * M_PI * p.xi * p.xi * d * d, -1.0 / 3.0);
  return m;
}

double outage_only_margin(double xi) {
  if (xi <= 0 || xi >= 1) throw DomainError("outage_only_margin: xi must be in (0,1)");
  return -1.0 / std::log1p(-xi);
}

}  // namespace urt::dep
