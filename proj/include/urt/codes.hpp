#pragma once
#include <cstdint>
#include <functional>
#include <vector>

namespace urt::codes {

// Polar code over blocklength n = 2^m; leaves are numbered 1..n left to
// right, so frozen[i] refers to synthetic channel i+1.
struct PolarCode {
  int n = 0;
  int k = 0;
  std::vector<bool> frozen;  // size n, true = frozen (decodes to zero)
  double design_param = 0.5;
};

// Bhattacharyya construction: recursion z -> {2z - z^2, z^2} from the design
// parameter; the n-k least reliable synthetic channels are frozen.
PolarCode polar_construct(int n, int k, double design_param = 0.5);

std::vector<std::uint8_t> polar_encode(const PolarCode& code,
                                       const std::vector<std::uint8_t>& info);

// Successive-cancellation decoding from channel LLRs (positive = bit 0).
std::vector<std::uint8_t> polar_sc_decode(const PolarCode& code,
                                          const std::vector<double>& llrs);

enum class Modulation { bpsk, qpsk };

struct BlerEstimate {
  double bler;
  std::uint64_t trials;
  std::uint64_t errors;
};

BlerEstimate polar_bler_sim(const PolarCode& code, double snr_db, Modulation mod,
                            std::uint64_t trials, std::uint64_t seed);

struct BinaryCodebook {
  int blocklength = 0;
  std::function<bool(const std::vector<std::uint8_t>&)> contains;
};

// Codebook of a systematic-form generator matrix (rows over GF(2)).
BinaryCodebook codebook_from_generator(const std::vector<std::vector<std::uint8_t>>& g);

// BSC noise-guessing order: patterns by non-decreasing Hamming weight
// (non-increasing likelihood for crossover < 1/2), lexicographic on flip
// positions within a weight class.
struct NoiseQueryOrder {
  double crossover = 0.0;
};

struct GrandResult {
  bool decoded;                        // false = abandoned
  std::vector<std::uint8_t> codeword;  // empty on abandonment
  std::uint64_t queries;
};

GrandResult grand_decode(const BinaryCodebook& book,
                         const std::vector<std::uint8_t>& y,
                         const NoiseQueryOrder& order, std::uint64_t max_queries);

}  // namespace urt::codes
