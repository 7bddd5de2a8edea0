#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "randsel/instance_io.hpp"
#include "randsel/sampling.hpp"

namespace randsel {

inline constexpr int kCsvSchemaVersion = 1;
inline constexpr const char* kLibraryVersion = "0.1.0";

// Key-value experiment settings. File format: one `key = value` per line,
// '#' comments, lists as `a,b,c` or `first:last:step`.
struct ExperimentConfig {
  int m = 3;
  int n_c = 42;
  std::vector<int> n_s{40, 80, 120, 160, 200, 240, 280, 320, 360, 400};
  double delta = 0.05;
  int n_p = 5;
  std::vector<int> k{1, 2, 3, 6};          // partition counts
  double gamma = 0.10;                     // randomized greedy
  int greedy_runs = 10;
  std::vector<int> k_u{10, 20, 40, 80, 160, 400};
  std::vector<int> caps;                   // explicit caps, overrides k_u
  int trials = 100;
  std::uint64_t seed = 1;
  int timing_repeats = 5;
  double sigma2 = 0.5;
  double q = 0.5;
  double entry_low = 0.0;
  double entry_high = 1.0;
  std::string instance;                    // load instead of generating
  int workers = 0;

  static ExperimentConfig Parse(const std::string& text);
  static ExperimentConfig Load(const std::string& path);
  // Applies one `key = value` assignment.
  void set(const std::string& key, const std::string& value);
  void validate() const;
  // Canonical sorted `key = value` text; the config hash covers this.
  std::string canonical() const;
  std::uint64_t hash() const;
};

std::uint64_t fnv1a64(const std::string& text);

// Random instance: A and c_i entries uniform on [entry_low, entry_high),
// σ_i² = sigma2, Q = q·I. Regenerates until every (A, c_i) is detectable.
Instance generate_instance(const ExperimentConfig& config, RngStream& rng);
// The instance named by config.instance, or a generated one.
Instance experiment_instance(const ExperimentConfig& config);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  std::string to_csv() const;
  // Numeric view of one column; throws if any entry is not a number.
  std::vector<double> column(const std::string& name) const;
};

std::string cell(double v);
std::string cell(long v);
inline std::string cell(int v) { return cell(static_cast<long>(v)); }

struct RunRecord {
  std::string study;
  ExperimentConfig config;
  Table trials;    // one row per Monte Carlo trial
  Table summary;   // aggregates, recomputable from `trials`
  Table timings;   // wall-clock measurements; excluded from replay checks
};

// Mean and sample standard deviation of `lambda_bar_P` per group key.
struct TrialStats {
  double mean = 0.0;
  double stddev = 0.0;
  double coverage = 0.0;
  int count = 0;
};
std::map<std::vector<std::string>, TrialStats> summarize_trials(
    const Table& trials, const std::vector<std::string>& keys);

RunRecord run_policy_comparison(const ExperimentConfig& config);
RunRecord run_heterogeneous_study(const ExperimentConfig& config);
RunRecord run_constrained_study(const ExperimentConfig& config);

// Smallest n_s at which uniform sampling certifies λ̄(U) <= target, or
// nullopt if none up to n_max.
std::optional<int> uniform_matching_sample_size(const SensorPool& pool, double target,
                                                double delta, const LtiSystem& system,
                                                int n_max);

// Writes <dir>/<study>_trials.csv, _summary.csv, _timings.csv and
// <study>_meta.json.
void write_run_record(const RunRecord& record, const std::string& dir);
std::string run_metadata_json(const RunRecord& record);

}  // namespace randsel
