#pragma once
#include <cstdint>
#include <functional>
#include <vector>

namespace urt::dep {

// Two-state (up/down) continuous-time Markov model of a fading link.
struct TwoStateMarkov {
  double failure_rate;  // up -> down transitions per second
  double repair_rate;   // down -> up transitions per second
};

struct DependabilitySummary {
  double availability;
  double mttf;  // mean time to failure (up-state sojourn)
  double mut;   // mean up time
  double mdt;   // mean down time
};

// Level-crossing rates of a Rayleigh channel against an SNR threshold.
// gamma_th, gamma_bar in linear scale; f_d is the Doppler frequency in Hz.
TwoStateMarkov gilbert_elliot_rates(double gamma_th, double gamma_bar, double f_d);

DependabilitySummary steady_quantities(const TwoStateMarkov& m);

// Probability the link stays up over [0, t] given it is up at 0.
double reliability_at(const TwoStateMarkov& m, double t);

// Coherent structure over n independent components.
struct StructureSpec {
  enum class Kind { series, parallel, k_out_of_n, explicit_table };
  Kind kind = Kind::series;
  int n = 0;
  int k = 0;  // k_out_of_n only
  // explicit_table only: maps a bitmask of up components (bit i = component i)
  // to system up/down.  Evaluated by full enumeration; n is capped at 25.
  std::function<bool(std::uint32_t)> structure;

  static StructureSpec series(int n);
  static StructureSpec parallel(int n);
  static StructureSpec k_out_of_n(int k, int n);
  static StructureSpec explicit_table(int n, std::function<bool(std::uint32_t)> fn);
};

// System availability given per-component availabilities p[i].
double structure_availability(const StructureSpec& s, const std::vector<double>& p);

// Minimum-duration outage analysis: fades shorter than the burst duration are
// survivable; f is the SNR fade margin (linear).
struct MdoProblem {
  double xi;                // target MDO probability, must be < 2e-3
  double burst_duration_s;  // tolerable burst duration u*T_s, seconds
  double doppler_hz;        // Doppler frequency
};

// Upper bound on the probability of a non-survivable outage at margin f.
// Valid only while the model's mean down time is shorter than the burst.
double mdo_probability_bound(const TwoStateMarkov& m, double burst_duration_s,
                             double doppler_hz, double f);

struct MdoMargin {
  double margin;              // root of bound(f) == xi (linear)
  double margin_closed_form;  // small-xi closed form (linear)
};

MdoMargin mdo_margin(const MdoProblem& p);

// Margin required when any outage counts, regardless of duration.
double outage_only_margin(double xi);

}  // namespace urt::dep
