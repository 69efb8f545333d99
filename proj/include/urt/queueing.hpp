#pragma once
#include <optional>
#include <vector>

namespace urt::queueing {

// QoS-exponent model: theta is the tail decay rate of the queue, C_e the
// effective capacity in bits per channel use.
struct QosModel {
  double theta;
  double c_e;
  double symbol_period_s = 0.0;  // optional wall-clock conversion
};

// P(delay > delta_max), delta_max in channel uses.
double delay_outage(const QosModel& model, double delta_max);

// Effective capacity of a fixed-rate transmission (rate r, outage eps) over
// blocks of n channel uses.
double effcap_fixed_rate(double r, double eps, double theta, int n);

// Rayleigh block-fading outage at rate r and mean SNR rho (linear).
double rayleigh_outage(double r, double rho);

struct TradeoffPoint {
  double availability;  // 1 - delay outage; 1 when saturated
  double delta_max;     // channel uses
  double rho;           // linear SNR
  double theta;         // solved QoS exponent (meaningless if !feasible)
  bool feasible;
  bool saturated;  // zero outage: any theta works, availability -> 1
};

// Availability-latency-power trade-off: for every (rho, delta_max) grid
// point, solve for the QoS exponent that sustains c_e_target at fixed rate r
// over n-use blocks, then report availability 1 - exp(-theta c_e delta_max).
std::vector<TradeoffPoint> availability_latency_power(
    double c_e_target, int n, double r, const std::vector<double>& rho_grid,
    const std::vector<double>& delta_grid);

struct OnOffSource {
  double s;  // ON probability
  double r;  // peak arrival rate, bits/block
};

double effective_bandwidth_onoff(const OnOffSource& src, double theta);

// Largest mean arrival rate s*r an ON-OFF source can sustain against
// effective capacity c_e; empty when infeasible.
std::optional<double> max_arrival_rate(double s, double theta, double c_e);

struct SncEnvelope {
  double rate;   // rho, bits/slot
  double burst;  // b, bits
  double theta;
};

// Steady-state MGF-calculus bound on P(delay > w slots); clipped at 1.
double snc_delay_violation(const SncEnvelope& arrival, const SncEnvelope& service,
                           double w);

struct AoiModel {
  enum class Kind { mm1, mg1, mg11, mm11, mm12, lcfs_preempt };
  Kind kind = Kind::mm1;
  double lambda = 1.0;
  double mu = 1.0;
  // (E[S], E[S^2]) for the general-service kinds; mu is then 1/E[S]
  std::vector<double> service_moments;
};

// Mean peak age of information (closed forms per queue kind).
double peak_aoi(const AoiModel& model);

// Empirical peak AoI of the just-in-time policy from observed service times.
double jit_peak_aoi(const std::vector<double>& service_times);

// Age survival function of M/M/1 LCFS with preemption.
double age_survival_lcfs(double lambda, double mu, double t);

}  // namespace urt::queueing
