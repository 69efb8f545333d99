#include "urt/largescale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"
#include "urt/rng.hpp"

namespace urt::largescale {

namespace {

void check_query(const MetaDistQuery& q) {
  if (q.density <= 0 || q.r0 <= 0 || q.gamma_th <= 0)
    throw DomainError("meta distribution: density, r0, gamma_th must be positive");
  if (q.alpha <= 2) throw DomainError("meta distribution: alpha must exceed 2");
  if (q.xi <= 0 || q.xi >= 1) throw DomainError("meta distribution: xi in (0,1)");
}

// interference level separating xi-compliant from non-compliant nodes
double critical_v(const MetaDistQuery& q) {
  return -std::log1p(-q.xi) / (q.gamma_th * std::pow(q.r0, q.alpha));
}

}  // namespace

double metadist_closed_form_alpha4(const MetaDistQuery& q) {
  check_query(q);
  if (q.alpha != 4.0)
    throw CapabilityError("metadist_closed_form_alpha4: closed form needs alpha = 4");
  double x = M_PI * M_PI * M_PI * q.density * q.density * q.gamma_th *
             std::pow(q.r0, 4.0) / (4.0 * -std::log1p(-q.xi));
  return std::erfc(std::sqrt(x));
}

McEstimate metadist_mc(const MetaDistQuery& q, std::uint64_t realizations,
                       double window_radius, std::uint64_t seed) {
  check_query(q);
  if (realizations == 0) throw DomainError("metadist_mc: need realizations >= 1");
  const double v_star = critical_v(q);
  double radius = window_radius;
  if (radius <= 0) {
    // mean interference beyond R is 2 pi lambda R^{2-alpha}/(alpha-2);
    // keep it below 1% of the critical level
    radius = std::pow(2.0 * M_PI * q.density / ((q.alpha - 2.0) * 0.01 * v_star),
                      1.0 / (q.alpha - 2.0));
    // in sparse fields the mean rule alone truncates lone nodes that exceed
    // the critical level by themselves; also keep any node contributing more
    // than 1% of that level inside the window
    radius = std::max(radius, std::pow(0.01 * v_star, -1.0 / q.alpha));
  }
  Rng rng(seed);
  const double mean_count = q.density * M_PI * radius * radius;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < realizations; ++i) {
    std::uint64_t k = rng.poisson(mean_count);
    double v = 0.0;
    for (std::uint64_t j = 0; j < k; ++j) {
      double r = radius * std::sqrt(rng.uniform());  // uniform over the disk
      v += std::pow(r, -q.alpha);
    }
    if (v <= v_star) ++hits;  // conditional success >= 1 - xi
  }
  McEstimate e;
  e.estimate = static_cast<double>(hits) / realizations;
  e.std_error = std::sqrt(e.estimate * (1.0 - e.estimate) / realizations);
  e.realizations = realizations;
  return e;
}

double success_prob_from_meta(const MetaDistQuery& q_without_xi, int grid_points) {
  if (grid_points < 8) throw DomainError("success_prob_from_meta: grid too coarse");
  MetaDistQuery q = q_without_xi;
  q.xi = 0.5;
  check_query(q);
  auto pm = [&](double xi) {
    MetaDistQuery qq = q_without_xi;
    qq.xi = xi;
    return metadist_closed_form_alpha4(qq);
  };
  // composite Simpson over xi in (0,1); the integrand vanishes smoothly at 0
  int n = grid_points + (grid_points % 2);  // even panel count
  const double a = 1e-12, b = 1.0 - 1e-12, h = (b - a) / n;
  double s = pm(a) + pm(b);
  for (int i = 1; i < n; ++i) s += pm(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

double interference_pdf_alpha4(double lambda, double v) {
  if (lambda <= 0) throw DomainError("interference_pdf_alpha4: lambda must be positive");
  if (v <= 0) return 0.0;
  double c = M_PI * M_PI * M_PI * lambda * lambda;  // pi^3 lambda^2
  return M_PI * lambda / (2.0 * std::pow(v, 1.5)) * std::exp(-c / (4.0 * v));
}

namespace {

void check_allocation(const ActivationMatrix& a, const Allocation& alloc) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw DomainError("collision: activation matrix must be square");
  std::vector<char> seen(n, 0);
  for (const auto& pool : alloc.pools)
    for (int i : pool) {
      if (i < 0 || i >= n || seen[i]) throw DomainError("collision: invalid allocation");
      seen[i] = 1;
    }
  for (char c : seen)
    if (!c) throw DomainError("collision: allocation must cover every device");
}

}  // namespace

CollisionReport collision_probability(const ActivationMatrix& a, const Allocation& alloc) {
  check_allocation(a, alloc);
  CollisionReport rep;
  rep.per_pool.reserve(alloc.pools.size());
  double sum = 0.0;
  for (const auto& pool : alloc.pools) {
    double no_collision = 1.0;
    for (std::size_t s = 0; s < pool.size(); ++s)
      for (std::size_t t = s + 1; t < pool.size(); ++t)
        no_collision *= 1.0 - a(pool[s], pool[t]);
    rep.per_pool.push_back(1.0 - no_collision);
    sum += rep.per_pool.back();
  }
  rep.average = alloc.pools.empty() ? 0.0 : sum / alloc.pools.size();
  return rep;
}

Allocation kmedoids_schedule(const ActivationMatrix& a, int pools, std::uint64_t seed,
                             int max_iter) {
  const int n = static_cast<int>(a.rows());
  if (a.cols() != n) throw DomainError("kmedoids_schedule: matrix must be square");
  if (pools < 1 || pools > n) throw DomainError("kmedoids_schedule: need 1 <= L <= N");
  auto d = [&](int i, int j) { return i == j ? 0.0 : a(i, j); };

  // greedy farthest-point initialization from a seeded start
  Rng rng(seed);
  std::vector<int> medoids{static_cast<int>(rng.uniform_int(n))};
  while ((int)medoids.size() < pools) {
    int best = -1;
    double best_dist = -1.0;
    for (int i = 0; i < n; ++i) {
      if (std::find(medoids.begin(), medoids.end(), i) != medoids.end()) continue;
      double nearest = std::numeric_limits<double>::infinity();
      for (int m : medoids) nearest = std::min(nearest, d(i, m));
      if (nearest > best_dist) {
        best_dist = nearest;
        best = i;
      }
    }
    medoids.push_back(best);
  }

  std::vector<int> assign(n, 0);
  // nearest-medoid assignment; ties (common under this dissimilarity) go to
  // the least-filled candidate pool so one pool cannot swallow the network
  auto assign_all = [&] {
    std::vector<int> count(pools, 0);
    for (int i = 0; i < n; ++i) {
      double bd = std::numeric_limits<double>::infinity();
      for (int l = 0; l < pools; ++l) bd = std::min(bd, d(i, medoids[l]));
      int best = -1;
      for (int l = 0; l < pools; ++l)
        if (d(i, medoids[l]) <= bd && (best < 0 || count[l] < count[best])) best = l;
      assign[i] = best;
      ++count[best];
    }
  };
  for (int it = 0; it < max_iter; ++it) {
    assign_all();
    bool changed = false;
    for (int l = 0; l < pools; ++l) {
      int best = medoids[l];
      double bc = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (assign[i] != l) continue;
        double cost = 0.0;
        for (int j = 0; j < n; ++j)
          if (assign[j] == l) cost += d(i, j);
        if (cost < bc) {
          bc = cost;
          best = i;
        }
      }
      if (best != medoids[l]) {
        medoids[l] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  assign_all();
  Allocation alloc;
  alloc.pools.assign(pools, {});
  for (int i = 0; i < n; ++i) alloc.pools[assign[i]].push_back(i);
  return alloc;
}

std::vector<double> amp_channel_norms(const AmpProblem& p, int iterations,
                                      double denoiser_scale) {
  const auto tau_p = p.phi.rows();
  const auto n = p.phi.cols();
  const auto m = p.y.cols();
  if (p.y.rows() != tau_p) throw DomainError("amp: Y and Phi row counts differ");
  if (iterations < 1) throw DomainError("amp: need iterations >= 1");
  for (Eigen::Index c = 0; c < n; ++c)
    if (std::fabs(p.phi.col(c).norm() - 1.0) > 1e-9)
      throw DomainError("amp: pilot columns must be unit norm");

  Eigen::MatrixXcd s_hat = Eigen::MatrixXcd::Zero(m, n);  // columns are s_n
  Eigen::MatrixXcd r = p.y;
  for (int t = 0; t < iterations; ++t) {
    // per-entry residual std; group threshold scales with sqrt(M)
    double sigma = r.norm() / std::sqrt(static_cast<double>(tau_p * m));
    double tau_t = denoiser_scale * sigma * std::sqrt(static_cast<double>(m));
    // matched filter Phi^H r, one column per device (transpose, no conjugate)
    Eigen::MatrixXcd v = (p.phi.adjoint() * r).transpose() + s_hat;
    Eigen::MatrixXcd jac_sum = Eigen::MatrixXcd::Zero(m, m);
    Eigen::MatrixXcd s_next = Eigen::MatrixXcd::Zero(m, n);
    for (Eigen::Index col = 0; col < n; ++col) {
      double norm = v.col(col).norm();
      if (norm > tau_t) {
        double shrink = 1.0 - tau_t / norm;
        s_next.col(col) = v.col(col) * shrink;
        // Wirtinger derivative of the group soft threshold: the norm depends
        // on v and conj(v) symmetrically, so the rank-one part carries a 1/2
        jac_sum += shrink * Eigen::MatrixXcd::Identity(m, m) +
                   (0.5 * tau_t / (norm * norm * norm)) * v.col(col) * v.col(col).adjoint();
      }
    }
    s_hat = std::move(s_next);
    r = p.y - p.phi * s_hat.transpose() + r * jac_sum / static_cast<double>(tau_p);
    if (!r.allFinite())
      throw NumericalError("amp: residual diverged at iteration " + std::to_string(t + 1));
  }
  std::vector<double> norms(n);
  for (Eigen::Index col = 0; col < n; ++col) norms[col] = s_hat.col(col).norm();
  return norms;
}

std::vector<int> amp_detect(const AmpProblem& p, int iterations, double psi,
                            double denoiser_scale) {
  if (psi < 0) throw DomainError("amp_detect: psi must be >= 0");
  auto norms = amp_channel_norms(p, iterations, denoiser_scale);
  std::vector<int> act(norms.size());
  for (std::size_t i = 0; i < norms.size(); ++i) act[i] = norms[i] >= psi ? 1 : 0;
  return act;
}

std::vector<int> amp_detect_known_sparsity(const AmpProblem& p, int iterations,
                                           int k_active, double denoiser_scale) {
  auto norms = amp_channel_norms(p, iterations, denoiser_scale);
  const int n = static_cast<int>(norms.size());
  if (k_active < 0 || k_active > n)
    throw DomainError("amp_detect_known_sparsity: need 0 <= k_active <= N");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });
  std::vector<int> act(n, 0);
  for (int i = 0; i < k_active; ++i) act[idx[i]] = 1;
  return act;
}

}  // namespace urt::largescale
