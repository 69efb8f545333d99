#include "urt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "urt/codes.hpp"
#include "urt/dependability.hpp"
#include "urt/errors.hpp"
#include "urt/evt.hpp"
#include "urt/fbl.hpp"
#include "urt/largescale.hpp"
#include "urt/numerics.hpp"
#include "urt/queueing.hpp"
#include "urt/raresim.hpp"
#include "urt/rng.hpp"
#include "urt/tails.hpp"

#include <CLI11.hpp>

namespace urt::cli {

namespace {

std::string fmt_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);  // shortest exact form
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& tok) {
  if (tok == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (tok == "inf") return std::numeric_limits<double>::infinity();
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw DomainError("csv: malformed numeric token '" + tok + "'");
  return v;
}

double db2lin(double db) { return std::pow(10.0, db / 10.0); }
double lin2db(double lin) { return 10.0 * std::log10(lin); }

// Typed parameter bag with defaults; unknown override keys are rejected.
class Params {
 public:
  Params(std::map<std::string, double> defaults,
         const std::map<std::string, double>& overrides)
      : values_(std::move(defaults)) {
    for (const auto& [k, v] : overrides) {
      auto it = values_.find(k);
      if (it == values_.end())
        throw DomainError("unknown parameter '" + k + "' for this experiment");
      it->second = v;
    }
  }
  double get(const std::string& k) const { return values_.at(k); }
  int geti(const std::string& k) const {
    return static_cast<int>(std::llround(values_.at(k)));
  }
  std::uint64_t getu(const std::string& k) const {
    return static_cast<std::uint64_t>(std::llround(values_.at(k)));
  }

 private:
  std::map<std::string, double> values_;
};

Eigen::VectorXcd complex_normal(Rng& rng, int m) {
  Eigen::VectorXcd v(m);
  const double s = std::sqrt(0.5);
  for (int i = 0; i < m; ++i) v[i] = std::complex<double>(rng.normal(), rng.normal()) * s;
  return v;
}

// Rician small-scale vector: fixed unit-modulus LOS component plus CN scatter.
Eigen::VectorXcd rician_channel(Rng& rng, int m, double k_factor) {
  Eigen::VectorXcd los(m);
  for (int i = 0; i < m; ++i) {
    double phase = 2.0 * M_PI * i / m;
    los[i] = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  double a = std::sqrt(k_factor / (1.0 + k_factor));
  double b = std::sqrt(1.0 / (1.0 + k_factor));
  return a * los + b * complex_normal(rng, m);
}

using Runner = std::function<void(const Params&, std::uint64_t seed, CsvTable&)>;

struct Experiment {
  std::string summary;
  std::map<std::string, double> defaults;
  Runner run;
};

// ---------------------------------------------------------------- mdo-margin

void run_mdo_margin(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"xi", "margin_db", "margin_closed_form_db", "outage_only_margin_db"};
  const double uts = p.get("burst_duration_s"), fd = p.get("doppler_hz");
  for (double e = p.get("xi_min"); e <= p.get("xi_max") * 1.0000001; e *= 10.0) {
    auto m = dep::mdo_margin({e, uts, fd});
    t.rows.push_back({e, lin2db(m.margin), lin2db(m.margin_closed_form),
                      lin2db(dep::outage_only_margin(e))});
  }
}

// ----------------------------------------------------------------- sinr-tail

tails::SinrNetwork sinr_scenario(int idx, double gamma0_db) {
  tails::SinrNetwork net;
  net.mean_snr = db2lin(gamma0_db);
  switch (idx) {
    case 0:  // one weak interferer
      net.interferer_mean_snr = {db2lin(-10.0)};
      break;
    case 1:  // four interferers, -20 + 5k dB
      for (int k = 1; k <= 4; ++k) net.interferer_mean_snr.push_back(db2lin(-20.0 + 5.0 * k));
      break;
    case 2:  // six interferers, -20 + 4k dB
      for (int k = 1; k <= 6; ++k) net.interferer_mean_snr.push_back(db2lin(-20.0 + 4.0 * k));
      break;
    case 3:  // nine interferers, -21 + 3k dB
      for (int k = 1; k <= 9; ++k) net.interferer_mean_snr.push_back(db2lin(-21.0 + 3.0 * k));
      break;
    default:
      throw DomainError("sinr-tail: scenario index out of range");
  }
  return net;
}

void run_sinr_tail(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"scenario", "gamma_th_db", "outage_exact", "outage_tail"};
  for (int sc = 0; sc < 4; ++sc) {
    auto net = sinr_scenario(sc, p.get("gamma0_db"));
    for (double g = p.get("gamma_th_db_min"); g <= p.get("gamma_th_db_max") + 1e-9;
         g += p.get("gamma_th_db_step")) {
      double gth = db2lin(g);
      t.rows.push_back({static_cast<double>(sc), g, tails::sinr_outage_exact(net, gth),
                        tails::sinr_outage_tail_approx(net, gth)});
    }
  }
}

// ----------------------------------------------------------- precoder-markov

double mc_outage_of_precoder(const Eigen::VectorXcd& w, double noise, double gamma_th,
                             int m, double k_factor, std::uint64_t draws, Rng rng) {
  std::uint64_t fails = 0;
  for (std::uint64_t i = 0; i < draws; ++i) {
    auto h = rician_channel(rng, m, k_factor);
    if (std::norm(w.dot(h)) / noise < gamma_th) ++fails;
  }
  return static_cast<double>(fails) / draws;
}

void run_precoder_markov(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"history_len", "rep", "tx_power_db", "mc_outage", "feasible"};
  const int m = p.geti("antennas");
  const double k_factor = db2lin(p.get("los_db"));
  const double gamma_th = db2lin(p.get("gamma_th_db"));
  const double xi = p.get("xi");
  const double noise = 1.0;
  Rng root(seed);
  // fixed beam direction: the LOS steering vector, unit power
  Rng dir_rng = root.substream(0);
  Eigen::VectorXcd w_dir = rician_channel(dir_rng, m, 1e12).normalized();
  int lmax = p.geti("history_len_max");
  for (int l = p.geti("history_len_min"); l <= lmax; l *= 2) {
    for (int rep = 0; rep < p.geti("reps"); ++rep) {
      Rng r = root.substream(1000ull * l + rep);
      tails::ChannelHistory hist;
      hist.noise_power = noise;
      for (int i = 0; i < l; ++i) hist.entries.push_back(rician_channel(r, m, k_factor));
      // Markov statistic scales as 1/power, so the minimal certified power is
      // the unit-power statistic divided by xi
      auto base = tails::precoder_markov_feasible(hist, w_dir, gamma_th, xi);
      double power = base.margin;  // statistic / xi at unit power
      Eigen::VectorXcd w = std::sqrt(power) * w_dir;
      auto chk = tails::precoder_markov_feasible(hist, w, gamma_th, xi);
      double outage = mc_outage_of_precoder(w, noise, gamma_th, m, k_factor,
                                            p.getu("mc_draws"), r.substream(1));
      t.rows.push_back({static_cast<double>(l), static_cast<double>(rep),
                        lin2db(power), outage, chk.feasible ? 1.0 : 0.0});
    }
  }
}

// -------------------------------------------------------------- precoder-evt

void run_precoder_evt(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"xi", "rep", "evt_power_db", "markov_power_db", "evt_mc_outage"};
  const int m = p.geti("antennas");
  const double k_factor = db2lin(p.get("los_db"));
  const double gamma_th = db2lin(p.get("gamma_th_db"));
  const double ci = p.get("ci_level");
  Rng root(seed);
  Rng dir_rng = root.substream(0);
  Eigen::VectorXcd w_dir = rician_channel(dir_rng, m, 1e12).normalized();
  std::vector<double> xis;
  for (double e = p.get("xi_max"); e >= p.get("xi_min") * 0.9999999; e /= 10.0)
    xis.push_back(e);
  for (double xi : xis) {
    const int l = static_cast<int>(std::ceil(10.0 / xi));
    const double rho = std::sqrt(xi);  // exceedance fraction of the tail fit
    for (int rep = 0; rep < p.geti("reps"); ++rep) {
      Rng r = root.substream(static_cast<std::uint64_t>(1.0 / xi) * 100 + rep);
      tails::ChannelHistory hist;
      hist.noise_power = 1.0;
      for (int i = 0; i < l; ++i) hist.entries.push_back(rician_channel(r, m, k_factor));
      auto markov = tails::precoder_markov_feasible(hist, w_dir, gamma_th, xi);
      double markov_power = markov.margin;
      // EVT certificate is monotone in transmit power: scan for the minimum
      double evt_power = std::numeric_limits<double>::quiet_NaN();
      for (double pdb = p.get("power_db_min"); pdb <= p.get("power_db_max") + 1e-9;
           pdb += p.get("power_db_step")) {
        Eigen::VectorXcd w = std::sqrt(db2lin(pdb)) * w_dir;
        try {
          if (evt::precoder_evt_feasible(hist, w, gamma_th, xi, rho, ci).feasible) {
            evt_power = db2lin(pdb);
            break;
          }
        } catch (const NumericalError&) {
          // an ill-conditioned tail fit at this power counts as not certified
        }
      }
      double outage = std::numeric_limits<double>::quiet_NaN();
      if (std::isfinite(evt_power))
        outage = mc_outage_of_precoder(std::sqrt(evt_power) * w_dir, 1.0, gamma_th, m,
                                       k_factor, p.getu("mc_draws"), r.substream(1));
      t.rows.push_back({xi, static_cast<double>(rep),
                        std::isfinite(evt_power) ? lin2db(evt_power)
                                                 : std::numeric_limits<double>::quiet_NaN(),
                        lin2db(markov_power), outage});
    }
  }
}

// ------------------------------------------------------------ raresim-compare

raresim::TargetEvent mrc_event(int d, double gamma_bar, double rate) {
  raresim::TargetEvent ev;
  ev.dim = d;
  ev.sample = [](Rng& rng, std::span<double> x) {
    for (double& v : x) v = rng.exponential();
  };
  ev.log_density = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
      if (v < 0) return -std::numeric_limits<double>::infinity();
      s -= v;
    }
    return s;
  };
  // outage = combined SNR below threshold; negate so "score >= threshold"
  ev.score = [](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return -s;
  };
  ev.threshold = -(std::exp2(rate) - 1.0) / gamma_bar;
  return ev;
}

void run_raresim_compare(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"d",       "gamma_db",   "p_closed",  "p_cmc",  "cov_cmc",
              "p_subset", "cov_subset", "levels",    "subset_samples"};
  const double r = p.get("rate");
  const double q = p.get("q");
  Rng root(seed);
  int rowid = 0;
  for (int d : {2, 4, 8, 16}) {
    for (double gdb = p.get("gamma_db_min"); gdb <= p.get("gamma_db_max") + 1e-9;
         gdb += p.get("gamma_db_step")) {
      double gbar = db2lin(gdb);
      auto ev = mrc_event(d, gbar, r);
      double closed = raresim::mrc_outage(d, gbar, r);
      auto cmc = raresim::cmc_estimate(ev, p.getu("cmc_n"),
                                       root.substream(2 * rowid).next_u64());
      auto ss = raresim::subset_simulation(ev, p.getu("subset_n"), q,
                                           root.substream(2 * rowid + 1).next_u64());
      ++rowid;
      t.rows.push_back({static_cast<double>(d), gdb, closed, cmc.p_hat, cmc.cov,
                        ss.p_hat, ss.cov, static_cast<double>(ss.levels),
                        static_cast<double>(ss.samples_used)});
    }
  }
}

// -------------------------------------------------------------------- fbl-*

void run_fbl_rate(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"gamma_db", "eps", "n", "rate", "rate_over_capacity"};
  const bool corr = p.get("correction") != 0.0;
  for (double gdb : {0.0, 10.0}) {
    double g = db2lin(gdb);
    double c = fbl::capacity(g);
    for (double eps : {1e-3, 1e-6}) {
      for (int n = p.geti("n_min"); n <= p.geti("n_max"); n *= 2) {
        double r = fbl::max_rate(n, eps, g, corr).rate;
        t.rows.push_back({gdb, eps, static_cast<double>(n), r, r / c});
      }
    }
  }
}

void run_fbl_fading(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"los_db", "k_bits", "eps_expectation", "eps_asymptotic"};
  const int n = p.geti("n");
  for (double los_db : {-300.0, 10.0}) {  // effectively Rayleigh, strong LOS
    fbl::FadingSpec spec;
    spec.mean_snr = db2lin(p.get("mean_snr_db"));
    if (los_db <= -299.0) {
      spec.family = fbl::FadingSpec::Family::rayleigh;
    } else {
      spec.family = fbl::FadingSpec::Family::rician;
      spec.los_factor = db2lin(los_db);
    }
    for (double k = p.get("k_min"); k <= p.get("k_max") + 1e-9; k += p.get("k_step")) {
      t.rows.push_back({los_db, k,
                        fbl::avg_error_fading(spec, k, n, fbl::FadingMethod::expectation),
                        fbl::avg_error_fading(spec, k, n,
                                              fbl::FadingMethod::asymptotic_outage)});
    }
  }
}

void run_fbl_penalty(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"n", "rate", "delta_db", "delta0_db"};
  const double eps = p.get("eps");
  for (int n : {100, 500}) {
    for (double r = p.get("rate_min"); r <= p.get("rate_max") + 1e-9;
         r += p.get("rate_step")) {
      auto d = fbl::snr_penalty(r, n, eps);
      t.rows.push_back({static_cast<double>(n), r, lin2db(d.delta), lin2db(d.delta0)});
    }
  }
}

void run_metadata_success(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"service", "p_em", "p_ed", "p_ef", "n", "success", "success_no_meta"};
  const int nmax = p.geti("n_max");
  struct Service {
    double id, em, ed, ef;
  };
  for (const Service& s : {Service{0, 1e-3, 1e-3, 1e-3},    // urllc
                           Service{1, 1e-3, 1e-1, 1e-3}}) {  // mbb
    for (int n = 0; n <= nmax; ++n)
      t.rows.push_back({s.id, s.em, s.ed, s.ef, static_cast<double>(n),
                        fbl::success_with_metadata(s.em, s.ed, s.ef, n),
                        fbl::success_with_metadata(0.0, s.ed, s.ef, n)});
  }
}

// ------------------------------------------------------------------- codes

void run_polar_bler(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"n", "k", "snr_db", "bler", "trials", "fbl_error"};
  const auto trials = p.getu("trials");
  const bool qpsk = p.get("qpsk") != 0.0;
  Rng root(seed);
  int code_id = 0;
  for (auto [n, k] : {std::pair{128, 32}, {128, 64}, {128, 112}, {256, 64}}) {
    auto code = codes::polar_construct(n, k, 0.5);
    for (double snr = p.get("snr_db_min"); snr <= p.get("snr_db_max") + 1e-9;
         snr += p.get("snr_db_step")) {
      auto est = codes::polar_bler_sim(code, snr,
                                       qpsk ? codes::Modulation::qpsk
                                            : codes::Modulation::bpsk,
                                       trials, root.substream(code_id).next_u64());
      t.rows.push_back({static_cast<double>(n), static_cast<double>(k), snr, est.bler,
                        static_cast<double>(est.trials),
                        fbl::error_prob(n, k, db2lin(snr))});
    }
    ++code_id;
  }
}

std::vector<std::vector<std::uint8_t>> random_systematic_generator(Rng& rng, int k,
                                                                   int n) {
  std::vector<std::vector<std::uint8_t>> g(k, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < k; ++i) {
    g[i][i] = 1;
    for (int j = k; j < n; ++j) g[i][j] = rng.next_u64() & 1u;
  }
  return g;
}

void run_grand_ml(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"n", "k", "crossover", "trials", "ml_agreement", "bler", "mean_queries"};
  const int n = p.geti("n"), k = p.geti("k");
  const double cross = p.get("crossover");
  const auto trials = p.getu("trials");
  Rng rng(seed);
  auto g = random_systematic_generator(rng, k, n);
  auto book = codes::codebook_from_generator(g);
  // exhaustive codeword list for the ML oracle
  std::vector<std::vector<std::uint8_t>> words;
  for (std::uint32_t msg = 0; msg < (1u << k); ++msg) {
    std::vector<std::uint8_t> cw(n, 0);
    for (int i = 0; i < k; ++i)
      if ((msg >> i) & 1u)
        for (int j = 0; j < n; ++j) cw[j] ^= g[i][j];
    words.push_back(cw);
  }
  std::uint64_t agree = 0, block_err = 0, queries = 0;
  for (std::uint64_t tr = 0; tr < trials; ++tr) {
    const auto& sent = words[rng.uniform_int(words.size())];
    std::vector<std::uint8_t> y = sent;
    for (int j = 0; j < n; ++j)
      if (rng.uniform() < cross) y[j] ^= 1u;
    auto res = codes::grand_decode(book, y, {cross}, 1ull << n);
    queries += res.queries;
    // ML oracle: minimal-weight error pattern, ties broken like the decoder
    // (smaller weight first, then lexicographic flip positions, i.e. the
    // reversed-bitmask order of the error vector)
    const std::vector<std::uint8_t>* best = nullptr;
    std::pair<int, std::vector<int>> best_key{n + 1, {}};
    for (const auto& cw : words) {
      std::vector<int> flips;
      for (int j = 0; j < n; ++j)
        if (cw[j] != y[j]) flips.push_back(j);
      std::pair<int, std::vector<int>> key{static_cast<int>(flips.size()), flips};
      if (key < best_key) {
        best_key = std::move(key);
        best = &cw;
      }
    }
    if (res.decoded && best && res.codeword == *best) ++agree;
    if (!res.decoded || res.codeword != sent) ++block_err;
  }
  t.rows.push_back({static_cast<double>(n), static_cast<double>(k), cross,
                    static_cast<double>(trials),
                    static_cast<double>(agree) / trials,
                    static_cast<double>(block_err) / trials,
                    static_cast<double>(queries) / trials});
}

// ---------------------------------------------------------------- queueing

void run_effcap_tradeoff(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"rho_db", "delta_symbols", "latency_ms", "availability", "theta",
              "feasible"};
  std::vector<double> rho_grid, delta_grid;
  for (double rdb = p.get("rho_db_min"); rdb <= p.get("rho_db_max") + 1e-9;
       rdb += p.get("rho_db_step"))
    rho_grid.push_back(db2lin(rdb));
  for (double d = p.get("delta_min"); d <= p.get("delta_max") + 1e-9;
       d *= p.get("delta_factor"))
    delta_grid.push_back(d);
  auto points = queueing::availability_latency_power(
      p.get("c_e_target"), p.geti("n"), p.get("rate"), rho_grid, delta_grid);
  const double ts = p.get("symbol_period_s");
  for (const auto& pt : points)
    t.rows.push_back({lin2db(pt.rho), pt.delta_max, pt.delta_max * ts * 1e3,
                      pt.availability, pt.theta, pt.feasible ? 1.0 : 0.0});
}

void run_aoi_survival(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"lambda", "mu", "t", "survival"};
  for (auto [lam, mu] : {std::pair{1.0, 1.0}, {3.0, 3.0}, {3.0, 5.0}}) {
    for (double tt = 0.0; tt <= p.get("t_max") + 1e-9; tt += p.get("t_step"))
      t.rows.push_back({lam, mu, tt, queueing::age_survival_lcfs(lam, mu, tt)});
  }
}

void run_peak_aoi(const Params& p, std::uint64_t, CsvTable& t) {
  t.header = {"kind", "lambda", "mu", "peak_aoi"};
  const double lam = p.get("lambda"), mu = p.get("mu");
  using K = queueing::AoiModel::Kind;
  int kid = 0;
  for (K kind : {K::mm1, K::mg1, K::mg11, K::mm11, K::mm12}) {
    queueing::AoiModel m;
    m.kind = kind;
    m.lambda = lam;
    m.mu = mu;
    if (kind == K::mg1 || kind == K::mg11)
      m.service_moments = {1.0 / mu, 2.0 / (mu * mu)};  // exponential service
    t.rows.push_back({static_cast<double>(kid++), lam, mu, queueing::peak_aoi(m)});
  }
}

// --------------------------------------------------------------- largescale

void run_metadist(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"lambda", "xi", "p_m_closed", "p_m_mc", "mc_se", "p_s"};
  Rng root(seed);
  int i = 0;
  for (double lam : {1e-7, 1e-6, 1e-5}) {
    largescale::MetaDistQuery q;
    q.density = lam;
    q.gamma_th = db2lin(p.get("gamma_th_db"));
    q.r0 = p.get("r0");
    q.alpha = 4.0;
    q.xi = p.get("xi");
    auto mc = largescale::metadist_mc(q, p.getu("realizations"), 0.0,
                                      root.substream(i++).next_u64());
    t.rows.push_back({lam, q.xi, largescale::metadist_closed_form_alpha4(q),
                      mc.estimate, mc.std_error, largescale::success_prob_from_meta(q)});
  }
}

largescale::ActivationMatrix pairwise_kernel(int n) {
  largescale::ActivationMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = 1.0 / ((i + 1) + (j + 1) + std::abs(i - j));
  return a;
}

void run_schedule(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"n_devices", "pools", "kmedoids_avg_collision", "random_mean",
              "random_min", "baseline_seeds"};
  const int pools = p.geti("pools");
  const int bseeds = p.geti("baseline_seeds");
  Rng root(seed);
  for (int n : {16, 32, 64, 128}) {
    auto a = pairwise_kernel(n);
    auto alloc = largescale::kmedoids_schedule(a, pools, root.substream(n).next_u64());
    double km = largescale::collision_probability(a, alloc).average;
    double sum = 0.0, best = 1.0;
    for (int b = 0; b < bseeds; ++b) {
      Rng r = root.substream(100000ull + n * 1000 + b);
      largescale::Allocation rnd;
      rnd.pools.assign(pools, {});
      for (int i = 0; i < n; ++i)
        rnd.pools[r.uniform_int(pools)].push_back(i);  // per-device uniform pool
      double c = largescale::collision_probability(a, rnd).average;
      sum += c;
      best = std::min(best, c);
    }
    t.rows.push_back({static_cast<double>(n), static_cast<double>(pools), km,
                      sum / bseeds, best, static_cast<double>(bseeds)});
  }
}

void run_amp_detect(const Params& p, std::uint64_t seed, CsvTable& t) {
  t.header = {"psi", "error_rate_threshold", "error_rate_known_sparsity"};
  const int tau_p = p.geti("tau_p"), m = p.geti("m"), n = p.geti("n");
  const double gamma = db2lin(p.get("gamma_db"));
  const double act_prob = p.get("activation_prob");
  const int iters = p.geti("iterations");
  const int trials = p.geti("trials");
  const double denoiser_c = p.get("denoiser_c");
  Rng root(seed);
  // Bernoulli pilots, +-1/sqrt(tau_p): unit-norm columns
  Eigen::MatrixXcd phi(tau_p, n);
  {
    Rng r = root.substream(0);
    const double a = 1.0 / std::sqrt(static_cast<double>(tau_p));
    for (int i = 0; i < tau_p; ++i)
      for (int j = 0; j < n; ++j) phi(i, j) = (r.next_u64() & 1u) ? a : -a;
  }
  std::vector<double> psis;
  for (double ps = p.get("psi_min"); ps <= p.get("psi_max") * 1.0000001;
       ps *= p.get("psi_factor"))
    psis.push_back(ps);
  std::vector<double> err_thr(psis.size(), 0.0);
  double err_known = 0.0;
  for (int tr = 0; tr < trials; ++tr) {
    Rng r = root.substream(1 + tr);
    std::vector<int> truth(n, 0);
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(m, n);
    int active = 0;
    for (int j = 0; j < n; ++j)
      if (r.uniform() < act_prob) {
        truth[j] = 1;
        s.col(j) = complex_normal(r, m);
        ++active;
      }
    largescale::AmpProblem prob;
    prob.phi = phi;
    prob.gamma_bar = gamma;
    Eigen::MatrixXcd w(tau_p, m);
    for (int i = 0; i < tau_p; ++i)
      for (int j = 0; j < m; ++j)
        w(i, j) = std::complex<double>(r.normal(), r.normal()) * std::sqrt(0.5);
    prob.y = std::sqrt(tau_p * gamma) * phi * s.transpose() + w;
    auto norms = largescale::amp_channel_norms(prob, iters, denoiser_c);
    for (std::size_t pi = 0; pi < psis.size(); ++pi) {
      int errs = 0;
      for (int j = 0; j < n; ++j) errs += (norms[j] >= psis[pi] ? 1 : 0) != truth[j];
      err_thr[pi] += static_cast<double>(errs) / n;
    }
    auto det = largescale::amp_detect_known_sparsity(prob, iters, active, denoiser_c);
    int errs = 0;
    for (int j = 0; j < n; ++j) errs += det[j] != truth[j];
    err_known += static_cast<double>(errs) / n;
  }
  for (std::size_t pi = 0; pi < psis.size(); ++pi)
    t.rows.push_back({psis[pi], err_thr[pi] / trials, err_known / trials});
}

// ------------------------------------------------------------------ registry

const std::map<std::string, Experiment>& registry() {
  static const std::map<std::string, Experiment> reg = {
      {"amp-detect",
       {"sparse-activity detection error rate versus decision threshold",
        {{"tau_p", 48}, {"m", 64}, {"n", 200}, {"gamma_db", 20},
         {"activation_prob", 0.05}, {"iterations", 15}, {"trials", 10}, {"denoiser_c", 1.5},
         {"psi_min", 1}, {"psi_max", 1000}, {"psi_factor", 1.5}},
        run_amp_detect}},
      {"aoi-survival",
       {"age-of-information survival curves for LCFS queues with preemption",
        {{"t_max", 5}, {"t_step", 0.1}},
        run_aoi_survival}},
      {"effcap-tradeoff",
       {"availability-latency-power trade-off for fixed-rate transmission",
        {{"c_e_target", 0.2}, {"n", 100}, {"rate", 0.5}, {"rho_db_min", 0},
         {"rho_db_max", 50}, {"rho_db_step", 2}, {"delta_min", 10},
         {"delta_max", 20000}, {"delta_factor", 1.5},
         {"symbol_period_s", 35.7e-6}},
        run_effcap_tradeoff}},
      {"fbl-fading",
       {"finite-blocklength error over fading: exact average versus outage limit",
        {{"n", 100}, {"mean_snr_db", 10}, {"k_min", 10}, {"k_max", 300},
         {"k_step", 10}},
        run_fbl_fading}},
      {"fbl-penalty",
       {"finite-blocklength SNR penalty versus rate",
        {{"eps", 1e-5}, {"rate_min", 0.25}, {"rate_max", 4.0}, {"rate_step", 0.25}},
        run_fbl_penalty}},
      {"fbl-rate",
       {"finite-blocklength achievable rate versus blocklength",
        {{"n_min", 32}, {"n_max", 4096}, {"correction", 0}},
        run_fbl_rate}},
      {"grand-ml",
       {"guessing-based decoding versus exhaustive maximum likelihood",
        {{"n", 12}, {"k", 6}, {"crossover", 0.05}, {"trials", 1000}},
        run_grand_ml}},
      {"mdo-margin",
       {"fade margins for minimum-duration outage targets",
        {{"burst_duration_s", 2e-4}, {"doppler_hz", 93.33}, {"xi_min", 1e-7},
         {"xi_max", 1e-3}},
        run_mdo_margin}},
      {"metadata-success",
       {"packet success probability with and without metadata errors",
        {{"n_max", 1}},
        run_metadata_success}},
      {"metadist",
       {"SIR meta-distribution of a Poisson network: closed form and Monte Carlo",
        {{"gamma_th_db", -10}, {"r0", 80}, {"xi", 0.01}, {"realizations", 20000}},
        run_metadist}},
      {"peak-aoi",
       {"closed-form mean peak age of information per queue model",
        {{"lambda", 0.5}, {"mu", 1.0}},
        run_peak_aoi}},
      {"polar-bler",
       {"polar-code block error rate versus the finite-blocklength benchmark",
        {{"trials", 2000}, {"snr_db_min", 0}, {"snr_db_max", 6}, {"snr_db_step", 1},
         {"qpsk", 0}},
        run_polar_bler}},
      {"precoder-evt",
       {"tail-fitted precoder certification versus the mean-bound design",
        {{"antennas", 4}, {"los_db", -10}, {"gamma_th_db", 0}, {"xi_min", 1e-3},
         {"xi_max", 1e-2}, {"ci_level", 0.95}, {"reps", 5}, {"mc_draws", 20000},
         {"power_db_min", 0}, {"power_db_max", 50}, {"power_db_step", 0.25}},
        run_precoder_evt}},
      {"precoder-markov",
       {"mean-bound precoder certification from channel histories",
        {{"antennas", 4}, {"los_db", -10}, {"gamma_th_db", 0}, {"xi", 1e-3},
         {"history_len_min", 8}, {"history_len_max", 256}, {"reps", 10},
         {"mc_draws", 20000}},
        run_precoder_markov}},
      {"raresim-compare",
       {"crude Monte Carlo versus subset simulation on diversity-combining outage",
        {{"rate", 1}, {"q", 0.1}, {"cmc_n", 100000}, {"subset_n", 10000},
         {"gamma_db_min", 0}, {"gamma_db_max", 30}, {"gamma_db_step", 10}},
        run_raresim_compare}},
      {"schedule",
       {"collision-aware medoid scheduling versus random pooling",
        {{"pools", 8}, {"baseline_seeds", 100}},
        run_schedule}},
      {"sinr-tail",
       {"exact versus tail-approximate SINR outage on interference scenarios",
        {{"gamma0_db", 10}, {"gamma_th_db_min", -30}, {"gamma_th_db_max", 10},
         {"gamma_th_db_step", 2}},
        run_sinr_tail}},
  };
  return reg;
}

}  // namespace

std::string CsvTable::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += fmt_number(row[i]);
    }
    out += '\n';
  }
  for (const auto& f : footer) {
    out += "# ";
    out += f;
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  auto split = [](const std::string& s) {
    std::vector<std::string> toks;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        toks.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    toks.push_back(cur);
    return toks;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string payload = line.substr(1);
      if (!payload.empty() && payload[0] == ' ') payload.erase(0, 1);
      t.footer.push_back(payload);
      continue;
    }
    if (first) {
      t.header = split(line);
      first = false;
      continue;
    }
    auto toks = split(line);
    if (toks.size() != t.header.size()) throw DomainError("csv: ragged row");
    std::vector<double> row;
    row.reserve(toks.size());
    for (const auto& tok : toks) row.push_back(parse_number(tok));
    t.rows.push_back(std::move(row));
  }
  if (first) throw DomainError("csv: missing header");
  return t;
}

std::vector<ExperimentInfo> list_experiments() {
  std::vector<ExperimentInfo> out;
  for (const auto& [name, exp] : registry()) out.push_back({name, exp.summary});
  return out;  // std::map iteration is already alphabetized
}

CsvTable run(const std::string& experiment, const ExperimentConfig& cfg) {
  auto it = registry().find(experiment);
  if (it == registry().end())
    throw DomainError("unknown experiment '" + experiment + "'");
  Params params(it->second.defaults, cfg.overrides);
  CsvTable t;
  it->second.run(params, cfg.seed, t);
  for (const auto& row : t.rows)
    if (row.size() != t.header.size())
      throw NumericalError("experiment produced a ragged table");
  t.footer.push_back("experiment=" + experiment);
  t.footer.push_back("seed=" + std::to_string(cfg.seed));
  t.footer.push_back(std::string("version=") + kVersion);
  if (!cfg.out_path.empty()) {
    std::ofstream f(cfg.out_path, std::ios::binary);
    if (!f) throw DomainError("cannot open output path " + cfg.out_path);
    f << t.to_csv();
  }
  return t;
}

namespace {

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\"");
      auto e = s.find_last_not_of(" \t\"");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"urt: statistical analysis toolkit for ultra-reliable low-latency links"};
  std::string experiment, out_path, config_path;
  std::uint64_t seed = kDefaultSeed;
  bool seed_given = false, list = false;
  std::vector<std::string> sets;
  app.add_option("--experiment", experiment, "experiment name (see --list)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit RNG seed");
  app.add_option("--out", out_path, "output CSV path (default: stdout)");
  app.add_option("--config", config_path, "flat key=value config file");
  app.add_option("--set", sets, "override parameter, key=value (repeatable)");
  app.add_flag("--list", list, "list available experiments");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  seed_given = seed_opt->count() > 0;

  if (list) {
    for (const auto& info : list_experiments())
      std::cout << info.name << ": " << info.summary << "\n";
    return 0;
  }

  try {
    std::map<std::string, std::string> file_kv;
    if (!config_path.empty()) file_kv = read_config_file(config_path);
    ExperimentConfig cfg;
    // precedence: flags > config file > defaults
    if (auto it = file_kv.find("experiment"); it != file_kv.end()) {
      if (experiment.empty()) experiment = it->second;
      file_kv.erase(it);
    }
    if (auto it = file_kv.find("seed"); it != file_kv.end()) {
      if (!seed_given) seed = std::stoull(it->second);
      file_kv.erase(it);
    }
    if (auto it = file_kv.find("out"); it != file_kv.end()) {
      if (out_path.empty()) out_path = it->second;
      file_kv.erase(it);
    }
    for (const auto& [k, v] : file_kv) cfg.overrides[k] = parse_number(v);
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects key=value, got '" << s << "'\n";
        return 2;
      }
      cfg.overrides[s.substr(0, eq)] = parse_number(s.substr(eq + 1));
    }
    cfg.seed = seed;
    cfg.out_path = out_path;
    if (experiment.empty()) {
      std::cerr << "error: no experiment selected (use --experiment or --list)\n";
      return 2;
    }
    auto reg_it = registry().find(experiment);
    if (reg_it == registry().end()) {
      std::cerr << "error: unknown experiment '" << experiment << "'\n";
      return 2;
    }
    for (const auto& [k, v] : cfg.overrides) {
      if (reg_it->second.defaults.find(k) == reg_it->second.defaults.end()) {
        std::cerr << "error: unknown parameter '" << k << "' for experiment '"
                  << experiment << "'\n";
        return 2;
      }
    }
    CsvTable t = run(experiment, cfg);
    if (out_path.empty()) std::cout << t.to_csv();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace urt::cli
