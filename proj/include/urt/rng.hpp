#pragma once
#include <cstdint>
#include <cmath>

namespace urt {

// Counter-based generator built on the splitmix64 finalizer.  Each (key,
// counter) pair maps to an independent 64-bit output, so substreams derived
// from the same seed never collide and draws are reproducible regardless of
// how other streams advance.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed) ^ mix(stream ^ 0x9e3779b97f4a7c15ull))) {}

  Rng substream(std::uint64_t id) const {
    Rng r = *this;
    r.key_ = mix(key_ ^ mix(id + 0x632be59bd9b4e019ull));
    r.ctr_ = 0;
    r.have_cached_normal_ = false;
    return r;
  }

  std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9e3779b97f4a7c15ull); }

  // uniform in (0,1)
  double uniform() { return ((next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0); }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double normal() {
    if (have_cached_normal_) {
      have_cached_normal_ = false;
      return cached_normal_;
    }
    double u1 = uniform(), u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 6.283185307179586476925286766559 * u2;
    cached_normal_ = r * std::sin(th);
    have_cached_normal_ = true;
    return r * std::cos(th);
  }

  double exponential(double rate = 1.0) { return -std::log(uniform()) / rate; }

  // Knuth product method, split recursively for large means.
  std::uint64_t poisson(double mean) {
    std::uint64_t n = 0;
    while (mean > 500.0) {
      // thin a chunk: Poisson(mean) = Poisson(500) + Poisson(mean-500)
      n += poisson_small(500.0);
      mean -= 500.0;
    }
    return n + poisson_small(mean);
  }

  std::uint64_t uniform_int(std::uint64_t n) {  // in [0, n)
    return next_u64() % n;  // bias negligible for n << 2^64
  }

 private:
  std::uint64_t poisson_small(double mean) {
    double l = -mean, s = 0.0;
    std::uint64_t k = 0;
    while (true) {
      s += std::log(uniform());
      if (s < l) return k;
      ++k;
    }
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace urt
