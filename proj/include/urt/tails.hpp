#pragma once
#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace urt::tails {

enum class BoundKind {
  markov_simple,
  chebyshev,
  chernoff,
  moment,
  cantelli,
  paley_zygmund,
  vysochanskij_petunin,
  hoeffding,
};

// Whatever is known about a nonnegative random variable.  Each bound consumes
// only the fields it needs and rejects requests it cannot honour.
struct MomentSummary {
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> second_moment;  // E[X^2], for Paley-Zygmund
  // E[X^theta] for theta >= 1 (moment bound)
  std::function<double(double)> raw_moment;
  double moment_order = 0.0;  // which raw moment to use (0 = optimize over grid)
  // moment generating function E[e^{theta X}], finite for theta < mgf_theta_max
  std::function<double(double)> mgf;
  double mgf_theta_max = std::numeric_limits<double>::infinity();
  bool unimodal = false;  // required by vysochanskij_petunin
  // per-addend ranges [a_i, b_i] for a sum of independent bounded terms
  std::vector<std::pair<double, double>> addend_ranges;
};

// Bound on P(X >= x); paley_zygmund instead lower-bounds P(X > x) for x below
// the mean.  All results are clipped to [0, 1].
double concentration_bound(BoundKind kind, const MomentSummary& info, double x);

// Rayleigh-faded desired link with Rayleigh-faded interferers, all powers in
// linear scale.
struct SinrNetwork {
  double mean_snr;                        // desired link mean SNR
  std::vector<double> interferer_mean_snr;  // mean INR per interferer
};

double sinr_outage_exact(const SinrNetwork& net, double gamma_th);
double sinr_outage_tail_approx(const SinrNetwork& net, double gamma_th);

// Mean desired-link SNR guaranteeing (via the tail form) outage <= xi against
// total mean interference power gamma_bar: the exact inversion
// -(1+gamma_bar)*gamma_th/ln(1-xi) and the small-xi simplification
// (1+gamma_bar)*gamma_th/xi.
struct RequiredSnr {
  double exact;
  double simplified;
};
RequiredSnr required_snr_ultra_reliable(double gamma_bar, double gamma_th, double xi);

// Recorded small-scale channel realizations for one user; noise_power is the
// receiver noise level so that the beamformed SNR is |w^H h|^2 / noise_power.
struct ChannelHistory {
  std::vector<Eigen::VectorXcd> entries;
  double noise_power = 1.0;
};

struct Feasibility {
  bool feasible;
  double margin;  // feasibility statistic divided by xi (<= 1 means feasible)
};

// Markov-inequality certificate for a candidate precoder w: the empirical
// mean of N*gamma_th*|w^H h_l|^-2 must not exceed xi.  A zero beamformed gain
// makes the statistic infinite (infeasible), not an error.  A positive
// confidence c adds a Gaussian upper-confidence term of c standard errors.
Feasibility precoder_markov_feasible(const ChannelHistory& hist,
                                     const Eigen::VectorXcd& w, double gamma_th,
                                     double xi, double confidence = 0.0);

}  // namespace urt::tails
