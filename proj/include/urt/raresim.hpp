#pragma once
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "urt/rng.hpp"

namespace urt::raresim {

// A rare event {score(x) >= threshold} for x drawn from a base distribution.
struct TargetEvent {
  int dim = 1;
  std::function<void(Rng&, std::span<double>)> sample;              // base draw
  std::function<double(std::span<const double>)> log_density;      // base log-pdf
  std::function<double(std::span<const double>)> score;
  double threshold = 0.0;
};

struct RareEventEstimate {
  double p_hat = 0.0;
  double variance = 0.0;  // estimator variance
  double cov = 0.0;       // coefficient of variation sqrt(variance)/p_hat
  std::uint64_t samples_used = 0;
  int levels = 0;  // subset simulation only
};

RareEventEstimate cmc_estimate(const TargetEvent& ev, std::uint64_t n,
                               std::uint64_t seed);

// Importance sampling: draws from `proposal` and weights each indicator by
// `weight` = base density / proposal density at the draw.  With the base
// sampler as proposal and unit weights this reproduces cmc_estimate exactly
// for the same seed.
RareEventEstimate is_estimate(
    const TargetEvent& ev,
    const std::function<void(Rng&, std::span<double>)>& proposal,
    const std::function<double(std::span<const double>)>& weight, std::uint64_t n,
    std::uint64_t seed);

// Metropolis-Hastings proposal specification.
struct ProposalSpec {
  enum class Kind { random_walk, independence };
  Kind kind = Kind::random_walk;
  double step = 1.0;  // random-walk Gaussian step size
  // independence proposals: sampler and its log-density
  std::function<void(Rng&, std::span<double>)> sample;
  std::function<double(std::span<const double>)> log_density;
};

// Plain MH chain targeting exp(log_target); returns post-burn-in states.
std::vector<std::vector<double>> mh_chain(
    const std::function<double(std::span<const double>)>& log_target,
    const ProposalSpec& proposal, std::vector<double> x0, std::uint64_t n,
    std::uint64_t burn_in, std::uint64_t seed);

// Subset simulation with fixed conditional level probability q.  Level
// thresholds sit midway between the order statistics straddling the
// q-quantile; each seed spawns a component-wise random-walk MH chain of
// length 1/q - 1, and seeds stay in the level population.
RareEventEstimate subset_simulation(const TargetEvent& ev, std::uint64_t n,
                                    double q, std::uint64_t seed,
                                    int max_levels = 200, double mh_step = 1.0);

// Outage probability of d-branch maximum-ratio combining over i.i.d. Rayleigh
// branches: P(log2(1 + sum gamma_i) < r) with per-branch mean SNR gamma_bar.
double mrc_outage(int d, double gamma_bar, double rate);

}  // namespace urt::raresim
