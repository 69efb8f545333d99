#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace urt::largescale {

// SIR meta-distribution query for a Poisson field of interferers around a
// receiver at distance r0 from its transmitter, no fading on interference.
struct MetaDistQuery {
  double density;    // nodes per m^2
  double gamma_th;   // linear SIR threshold
  double r0;         // link distance, m
  double alpha = 4;  // path-loss exponent > 2
  double xi;         // per-node conditional outage target, (0,1)
};

// Fraction of nodes whose conditional outage meets xi (alpha = 4 only).
double metadist_closed_form_alpha4(const MetaDistQuery& q);

struct McEstimate {
  double estimate;
  double std_error;
  std::uint64_t realizations;
};

// Monte Carlo meta-distribution for any alpha > 2.  window_radius <= 0 picks
// a radius at which the expected truncated interference is under 1% of the
// outage-critical interference level.
McEstimate metadist_mc(const MetaDistQuery& q, std::uint64_t realizations,
                       double window_radius, std::uint64_t seed);

// Mean success probability: integral of the meta distribution over xi.
double success_prob_from_meta(const MetaDistQuery& q_without_xi, int grid_points = 512);

// Density of the aggregate interference V = sum ||x||^-4 of a unit-power
// Poisson field (alpha = 4).
double interference_pdf_alpha4(double lambda, double v);

// A(i,j) = probability devices i and j are simultaneously active.
using ActivationMatrix = Eigen::MatrixXd;

struct Allocation {
  std::vector<std::vector<int>> pools;
};

struct CollisionReport {
  std::vector<double> per_pool;
  double average;
};

CollisionReport collision_probability(const ActivationMatrix& a, const Allocation& alloc);

// K-medoids (PAM-style Voronoi iteration) under the dissimilarity
// d_ij = [i != j] A_ij, greedy farthest-point initialization.
Allocation kmedoids_schedule(const ActivationMatrix& a, int pools, std::uint64_t seed,
                             int max_iter = 100);

// Sparse-activity detection observation: Y = sqrt(tau_p gamma_bar) Phi S^T + W
// with unit-norm pilot columns in Phi.
struct AmpProblem {
  Eigen::MatrixXcd y;    // tau_p x M
  Eigen::MatrixXcd phi;  // tau_p x N, unit-norm columns
  double gamma_bar = 1.0;
};

// Row norms of the AMP estimate of S after the given iterations; the shared
// core of both detectors.
std::vector<double> amp_channel_norms(const AmpProblem& p, int iterations,
                                      double denoiser_scale = 1.0);

// Hard-threshold detector: device n active iff ||s_n|| >= psi.
std::vector<int> amp_detect(const AmpProblem& p, int iterations, double psi,
                            double denoiser_scale = 1.0);

// Known-sparsity detector: the k_active largest equivalent channel norms.
std::vector<int> amp_detect_known_sparsity(const AmpProblem& p, int iterations,
                                           int k_active, double denoiser_scale = 1.0);

}  // namespace urt::largescale
