#pragma once
#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "urt/tails.hpp"

namespace urt::evt {

struct GevParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;  // Gumbel in the limit shape -> 0
};

double gev_cdf(const GevParams& p, double z);

// Peaks-over-threshold fit.  rho is the exceedance fraction: the threshold is
// the empirical (1 - rho)-quantile and the generalized Pareto is fitted to
// the excesses by profile maximum likelihood.
struct GpdFit {
  double threshold;
  double exceedance_fraction;  // realized fraction of samples above threshold
  double shape;                // kappa
  double scale;                // sigma
  double shape_se;
  double scale_se;
  std::pair<double, double> shape_ci;
  std::pair<double, double> scale_ci;
  double ci_level;
  int n_exceedances;
};

GpdFit gpd_fit(std::vector<double> samples, double rho, double ci_level = 0.95);

// P(X > x) for x above the threshold, using the fitted tail.
double gpd_tail_prob(const GpdFit& fit, double x);

// Hill estimator of the tail index from the k largest samples.
double hill_tail_index(std::vector<double> samples, int k);

struct EvtCertificate {
  bool feasible;
  double worst_tail_prob;  // worst-case tail probability over the CI box
  double target;           // transformed feasibility point
  GpdFit fit;
};

// EVT-based feasibility certificate for a precoder candidate.  Samples
// theta_l = f(N |w^H h_l|^-2), N the history's noise power and
// f(x) = ln(1+x) by default, fits the tail
// above the (1 - rho)-quantile and requires the worst-case (over the shape
// and scale confidence box) tail probability at the transformed feasibility
// point to stay below xi / rho.
EvtCertificate precoder_evt_feasible(
    const tails::ChannelHistory& hist, const Eigen::VectorXcd& w, double gamma_th,
    double xi, double rho, double ci_level = 0.95,
    const std::function<double(double)>& transform = nullptr);

}  // namespace urt::evt
