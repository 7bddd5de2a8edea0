#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "randsel/concentration.hpp"
#include "randsel/system_model.hpp"

namespace randsel {

// Counter-based SplitMix64: output k is mix64(seed + k·γ) with γ the 64-bit
// golden-ratio increment. Substreams reseed through the same mixer, so trial
// i of a Monte Carlo run never depends on how other trials were scheduled.
class RngStream {
 public:
  static constexpr std::string_view kAlgorithm = "splitmix64-counter/v1";

  explicit RngStream(std::uint64_t seed) : seed_(seed) {}

  RngStream substream(std::uint64_t index) const;
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  // Uniform integer on [0, bound).
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

// Inverse-transform sampling from a categorical distribution.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(const Eigen::VectorXd& p);

  int size() const { return static_cast<int>(cdf_.size()); }
  const std::vector<double>& cdf() const { return cdf_; }
  const Eigen::VectorXd& probabilities() const { return p_; }
  // Smallest 0-based i with u < cdf[i].
  int index_for(double u) const;
  int draw(RngStream& rng) const { return index_for(rng.next_uniform()); }

 private:
  Eigen::VectorXd p_;
  std::vector<double> cdf_;
};

// n_s i.i.d. indices; consumes exactly n_s variates.
Selection draw_homogeneous(const CategoricalSampler& sampler, int n_s, RngStream& rng);

// Redraws until every cap holds. Default budget is ceil(50/α) attempts when
// α > 0, otherwise 10⁶.
Selection draw_constrained(const CategoricalSampler& sampler, int n_s,
                           const ConstraintSpec& spec, RngStream& rng,
                           std::optional<long> max_attempts = std::nullopt);

// One homogeneous draw of n_s⁽ⁱ⁾ from each partition, concatenated, with
// indices offset into the full pool.
Selection draw_heterogeneous(const Partitioning& partitioning,
                             const std::vector<CategoricalSampler>& samplers,
                             RngStream& rng);

}  // namespace randsel
