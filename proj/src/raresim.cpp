#include "urt/raresim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "urt/errors.hpp"
#include "urt/numerics.hpp"

namespace urt::raresim {

namespace {

void check_event(const TargetEvent& ev, bool need_density) {
  if (ev.dim < 1) throw DomainError("rare event: dim must be >= 1");
  if (!ev.sample || !ev.score) throw DomainError("rare event: missing sampler or score");
  if (need_density && !ev.log_density)
    throw CapabilityError("rare event: base log-density required");
}

}  // namespace

RareEventEstimate cmc_estimate(const TargetEvent& ev, std::uint64_t n,
                               std::uint64_t seed) {
  check_event(ev, false);
  if (n == 0) throw DomainError("cmc_estimate: n must be positive");
  Rng rng(seed);
  std::vector<double> x(ev.dim);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    ev.sample(rng, x);
    if (ev.score(x) >= ev.threshold) ++hits;
  }
  RareEventEstimate e;
  e.p_hat = static_cast<double>(hits) / n;
  e.variance = e.p_hat * (1.0 - e.p_hat) / n;
  e.cov = e.p_hat > 0 ? std::sqrt(e.variance) / e.p_hat
                      : std::numeric_limits<double>::infinity();
  e.samples_used = n;
  return e;
}

RareEventEstimate is_estimate(
    const TargetEvent& ev,
    const std::function<void(Rng&, std::span<double>)>& proposal,
    const std::function<double(std::span<const double>)>& weight, std::uint64_t n,
    std::uint64_t seed) {
  check_event(ev, false);
  if (!proposal || !weight) throw DomainError("is_estimate: missing proposal or weight");
  if (n == 0) throw DomainError("is_estimate: n must be positive");
  Rng rng(seed);
  std::vector<double> x(ev.dim);
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    proposal(rng, x);
    if (ev.score(x) >= ev.threshold) {
      double w = weight(x);
      if (!(w >= 0) || !std::isfinite(w))
        throw NumericalError("is_estimate: invalid importance weight");
      sum += w;
      sumsq += w * w;
    }
  }
  RareEventEstimate e;
  e.p_hat = sum / n;
  e.variance = std::max(0.0, sumsq / n - e.p_hat * e.p_hat) / n;
  e.cov = e.p_hat > 0 ? std::sqrt(e.variance) / e.p_hat
                      : std::numeric_limits<double>::infinity();
  e.samples_used = n;
  return e;
}

std::vector<std::vector<double>> mh_chain(
    const std::function<double(std::span<const double>)>& log_target,
    const ProposalSpec& proposal, std::vector<double> x0, std::uint64_t n,
    std::uint64_t burn_in, std::uint64_t seed) {
  if (!log_target) throw DomainError("mh_chain: missing target");
  if (x0.empty()) throw DomainError("mh_chain: empty initial state");
  const bool indep = proposal.kind == ProposalSpec::Kind::independence;
  if (indep && (!proposal.sample || !proposal.log_density))
    throw DomainError("mh_chain: independence proposal needs sampler and density");
  if (!indep && proposal.step <= 0)
    throw DomainError("mh_chain: random-walk step must be positive");
  Rng rng(seed);
  std::vector<double> x = x0, y(x0.size());
  double lx = log_target(x);
  std::vector<std::vector<double>> out;
  out.reserve(n);
  for (std::uint64_t t = 0; t < burn_in + n; ++t) {
    double log_ratio;
    if (indep) {
      proposal.sample(rng, y);
      log_ratio = log_target(y) - lx + proposal.log_density(x) - proposal.log_density(y);
    } else {
      for (std::size_t j = 0; j < x.size(); ++j)
        y[j] = x[j] + proposal.step * rng.normal();
      log_ratio = log_target(y) - lx;
    }
    if (std::log(rng.uniform()) < log_ratio) {
      x = y;
      lx = log_target(x);
    }
    if (t >= burn_in) out.push_back(x);
  }
  return out;
}

RareEventEstimate subset_simulation(const TargetEvent& ev, std::uint64_t n,
                                    double q, std::uint64_t seed, int max_levels,
                                    double mh_step) {
  check_event(ev, true);
  if (q <= 0 || q >= 1) throw DomainError("subset_simulation: q must be in (0,1)");
  if (n < 10) throw DomainError("subset_simulation: n too small");
  const std::uint64_t nq = static_cast<std::uint64_t>(std::lround(q * n));
  if (nq < 2 || nq >= n) throw DomainError("subset_simulation: q*n out of range");
  const int chain_len = static_cast<int>(std::lround(1.0 / q)) - 1;

  Rng root(seed);
  std::vector<std::vector<double>> pop(n, std::vector<double>(ev.dim));
  std::vector<double> scores(n);
  {
    Rng r0 = root.substream(0);
    for (std::uint64_t i = 0; i < n; ++i) {
      ev.sample(r0, pop[i]);
      scores[i] = ev.score(pop[i]);
    }
  }

  double log_p = 0.0, var_accum = 0.0;
  RareEventEstimate e;
  e.samples_used = n;
  for (int level = 0;; ++level) {
    std::uint64_t hits = 0;
    for (double s : scores)
      if (s >= ev.threshold) ++hits;
    double frac = static_cast<double>(hits) / n;
    if (frac >= q || level == max_levels) {
      if (frac == 0.0)
        throw NumericalError("subset_simulation: level budget exhausted before target");
      e.p_hat = std::exp(log_p) * frac;
      var_accum += (1.0 - frac) / (frac * n);
      e.cov = std::sqrt(var_accum);
      e.variance = (e.cov * e.p_hat) * (e.cov * e.p_hat);
      e.levels = level + 1;  // count the final conditional level too
      return e;
    }

    std::vector<std::uint64_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::uint64_t a, std::uint64_t b) { return scores[a] > scores[b]; });
    const double level_th = 0.5 * (scores[idx[nq - 1]] + scores[idx[nq]]);
    const double cond_p = static_cast<double>(nq) / n;
    log_p += std::log(cond_p);
    var_accum += (1.0 - cond_p) / (cond_p * n);

    // scale proposals to the spread of the surviving seeds so the walk keeps
    // moving once the level sets become narrow
    std::vector<double> step(ev.dim, mh_step);
    for (int j = 0; j < ev.dim; ++j) {
      double mean = 0.0, m2 = 0.0;
      for (std::uint64_t s = 0; s < nq; ++s) mean += pop[idx[s]][j];
      mean /= nq;
      for (std::uint64_t s = 0; s < nq; ++s) {
        double d = pop[idx[s]][j] - mean;
        m2 += d * d;
      }
      double sd = std::sqrt(m2 / nq);
      if (sd > 0.0) step[j] = mh_step * sd;
    }

    // regrow the population: keep the nq seeds, extend each by an MH chain
    std::vector<std::vector<double>> next;
    std::vector<double> next_scores;
    next.reserve(n);
    next_scores.reserve(n);
    for (std::uint64_t s = 0; s < nq; ++s) {
      next.push_back(pop[idx[s]]);
      next_scores.push_back(scores[idx[s]]);
    }
    for (std::uint64_t s = 0; s < nq; ++s) {
      Rng chain = root.substream((level + 1) * 1000003ull + s);
      std::vector<double> x = pop[idx[s]];
      double sx = scores[idx[s]];
      double lx = ev.log_density(x);
      std::vector<double> cand = x;
      for (int t = 0; t < chain_len; ++t) {
        // component-wise moves accepted on the base density, then the whole
        // candidate is kept only if it stays in the current level set
        cand = x;
        for (int j = 0; j < ev.dim; ++j) {
          double old = cand[j];
          cand[j] = old + step[j] * chain.normal();
          double lc = ev.log_density(cand);
          if (std::log(chain.uniform()) < lc - lx)
            lx = lc;
          else
            cand[j] = old;
        }
        double sc = ev.score(cand);
        if (sc >= level_th) {
          x = cand;
          sx = sc;
        } else {
          lx = ev.log_density(x);
        }
        next.push_back(x);
        next_scores.push_back(sx);
        ++e.samples_used;
      }
    }
    pop = std::move(next);
    scores = std::move(next_scores);
  }
}

double mrc_outage(int d, double gamma_bar, double rate) {
  if (d < 1 || gamma_bar <= 0 || rate <= 0)
    throw DomainError("mrc_outage: need d >= 1, gamma_bar > 0, rate > 0");
  double x = (std::exp2(rate) - 1.0) / gamma_bar;
  return num::gamma_p(d, x);
}

}  // namespace urt::raresim
