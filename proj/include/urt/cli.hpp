#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace urt::cli {

inline constexpr std::uint64_t kDefaultSeed = 20260826ull;
inline constexpr const char* kVersion = "urt 1.0.0";

// Rectangular numeric table with a provenance footer; the CSV is
// comma-separated with "." decimals, a mandatory header and "#" comments.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footer;  // comment payloads, no leading '#'

  std::string to_csv() const;
};

// Parses a CSV produced by to_csv back into a table (exact round trip).
CsvTable parse_csv(const std::string& text);

struct ExperimentConfig {
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;                          // empty = stdout only
  std::map<std::string, double> overrides;       // unknown keys rejected
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
};

// Alphabetized registry listing.
std::vector<ExperimentInfo> list_experiments();

// Runs one experiment; writes the CSV to cfg.out_path when set.
CsvTable run(const std::string& experiment, const ExperimentConfig& cfg);

// Full command-line front end; returns the process exit code
// (0 success, 1 computation failure, 2 usage).
int main_entry(int argc, char** argv);

}  // namespace urt::cli
