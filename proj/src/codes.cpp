#include "urt/codes.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <unordered_set>

#include "urt/errors.hpp"
#include "urt/rng.hpp"

namespace urt::codes {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

PolarCode polar_construct(int n, int k, double design_param) {
  if (!is_pow2(n)) throw DomainError("polar_construct: n must be a power of two");
  if (k < 0 || k > n) throw DomainError("polar_construct: need 0 <= k <= n");
  if (design_param <= 0 || design_param >= 1)
    throw DomainError("polar_construct: design parameter in (0,1)");
  std::vector<double> z{design_param};
  while ((int)z.size() < n) {
    std::vector<double> nz(z.size() * 2);
    for (std::size_t i = 0; i < z.size(); ++i) {
      nz[2 * i] = 2.0 * z[i] - z[i] * z[i];  // the degraded (minus) channel
      nz[2 * i + 1] = z[i] * z[i];
    }
    z = std::move(nz);
  }
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return z[a] > z[b]; });
  PolarCode code;
  code.n = n;
  code.k = k;
  code.design_param = design_param;
  code.frozen.assign(n, false);
  for (int i = 0; i < n - k; ++i) code.frozen[idx[i]] = true;
  return code;
}

std::vector<std::uint8_t> polar_encode(const PolarCode& code,
                                       const std::vector<std::uint8_t>& info) {
  if ((int)info.size() != code.k) throw DomainError("polar_encode: wrong info length");
  std::vector<std::uint8_t> u(code.n, 0);
  int pos = 0;
  for (int i = 0; i < code.n; ++i)
    if (!code.frozen[i]) u[i] = info[pos++] & 1u;
  for (int len = 1; len < code.n; len <<= 1)
    for (int i = 0; i < code.n; i += 2 * len)
      for (int j = i; j < i + len; ++j) u[j] ^= u[j + len];
  return u;
}

namespace {

struct ScDecoder {
  const PolarCode* code;
  std::vector<std::uint8_t> u;

  // decodes the subtree over leaves [off, off+len) and returns its codeword
  std::vector<std::uint8_t> run(const std::vector<double>& alpha, int off) {
    const int len = (int)alpha.size();
    if (len == 1) {
      std::uint8_t bit = code->frozen[off] ? 0 : (alpha[0] < 0.0);
      u[off] = bit;
      return {bit};
    }
    const int half = len / 2;
    std::vector<double> child(half);
    for (int i = 0; i < half; ++i) {  // f(a,b) = sgn(a)sgn(b) min(|a|,|b|)
      double a = alpha[i], b = alpha[i + half];
      child[i] = std::copysign(std::min(std::fabs(a), std::fabs(b)), a * b);
    }
    auto beta_l = run(child, off);
    for (int i = 0; i < half; ++i)  // g(a,b;c) = b + (1-2c)a
      child[i] = alpha[i + half] + (1.0 - 2.0 * beta_l[i]) * alpha[i];
    auto beta_r = run(child, off + half);
    std::vector<std::uint8_t> beta(len);
    for (int i = 0; i < half; ++i) {
      beta[i] = beta_l[i] ^ beta_r[i];
      beta[i + half] = beta_r[i];
    }
    return beta;
  }
};

}  // namespace

std::vector<std::uint8_t> polar_sc_decode(const PolarCode& code,
                                          const std::vector<double>& llrs) {
  if ((int)llrs.size() != code.n) throw DomainError("polar_sc_decode: wrong LLR length");
  for (double l : llrs)
    if (!std::isfinite(l)) throw DomainError("polar_sc_decode: LLRs must be finite");
  ScDecoder dec{&code, std::vector<std::uint8_t>(code.n, 0)};
  dec.run(llrs, 0);
  std::vector<std::uint8_t> info;
  info.reserve(code.k);
  for (int i = 0; i < code.n; ++i)
    if (!code.frozen[i]) info.push_back(dec.u[i]);
  return info;
}

BlerEstimate polar_bler_sim(const PolarCode& code, double snr_db, Modulation mod,
                            std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("polar_bler_sim: trials must be >= 1");
  const double gamma = std::pow(10.0, snr_db / 10.0);
  const double sigma2 = 1.0 / (2.0 * gamma);  // per-dimension noise variance
  const double amp = mod == Modulation::bpsk ? 1.0 : 1.0 / std::sqrt(2.0);
  Rng base(seed);
  std::uint64_t errors = 0;
  std::vector<std::uint8_t> info(code.k);
  std::vector<double> llrs(code.n);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = base.substream(t);
    for (int i = 0; i < code.k; ++i) info[i] = rng.next_u64() & 1u;
    auto x = polar_encode(code, info);
    // Gray-mapped QPSK is two independent binary dimensions at reduced
    // amplitude, so both modulations reduce to per-bit Gaussian LLRs.
    for (int i = 0; i < code.n; ++i) {
      double s = x[i] ? -amp : amp;
      double y = s + std::sqrt(sigma2) * rng.normal();
      llrs[i] = 2.0 * amp * y / sigma2;
    }
    if (polar_sc_decode(code, llrs) != info) ++errors;
  }
  return {static_cast<double>(errors) / trials, trials, errors};
}

BinaryCodebook codebook_from_generator(const std::vector<std::vector<std::uint8_t>>& g) {
  if (g.empty() || g[0].empty()) throw DomainError("codebook_from_generator: empty matrix");
  const int k = (int)g.size(), n = (int)g[0].size();
  if (k > 24 || n > 64)
    throw CapabilityError("codebook_from_generator: supports k <= 24, n <= 64");
  std::vector<std::uint64_t> rows(k, 0);
  for (int i = 0; i < k; ++i) {
    if ((int)g[i].size() != n) throw DomainError("codebook_from_generator: ragged matrix");
    for (int j = 0; j < n; ++j)
      if (g[i][j] & 1u) rows[i] |= 1ull << j;
  }
  auto words = std::make_shared<std::unordered_set<std::uint64_t>>();
  for (std::uint32_t m = 0; m < (1u << k); ++m) {
    std::uint64_t w = 0;
    for (int i = 0; i < k; ++i)
      if ((m >> i) & 1u) w ^= rows[i];
    words->insert(w);
  }
  BinaryCodebook book;
  book.blocklength = n;
  book.contains = [words, n](const std::vector<std::uint8_t>& bits) {
    if ((int)bits.size() != n) return false;
    std::uint64_t w = 0;
    for (int j = 0; j < n; ++j)
      if (bits[j] & 1u) w |= 1ull << j;
    return words->count(w) != 0;
  };
  return book;
}

GrandResult grand_decode(const BinaryCodebook& book, const std::vector<std::uint8_t>& y,
                         const NoiseQueryOrder& order, std::uint64_t max_queries) {
  const int n = book.blocklength;
  if ((int)y.size() != n) throw DomainError("grand_decode: wrong received length");
  if (order.crossover < 0 || order.crossover >= 0.5)
    throw DomainError("grand_decode: crossover must be in [0, 1/2)");
  std::vector<std::uint8_t> cand = y;
  std::uint64_t queries = 0;
  // weight 0 first, then each weight class in lexicographic flip order
  for (int w = 0; w <= n; ++w) {
    std::vector<int> pos(w);
    std::iota(pos.begin(), pos.end(), 0);
    while (true) {
      if (queries == max_queries) return {false, {}, queries};
      cand = y;
      for (int p : pos) cand[p] ^= 1u;
      ++queries;
      if (book.contains(cand)) return {true, cand, queries};
      if (w == 0) break;
      // next combination of w positions out of n
      int i = w - 1;
      while (i >= 0 && pos[i] == n - w + i) --i;
      if (i < 0) break;
      ++pos[i];
      for (int j = i + 1; j < w; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
  return {false, {}, queries};
}

}  // namespace urt::codes
