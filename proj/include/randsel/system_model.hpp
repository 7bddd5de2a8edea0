#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randsel/matrix_core.hpp"

namespace randsel {

// x(t+1) = A x(t) + w(t), w ~ N(0, Q) with Q positive definite.
class LtiSystem {
 public:
  LtiSystem(Eigen::MatrixXd a, SymmetricMatrix q);

  const Eigen::MatrixXd& a() const { return a_; }
  const PsdMatrix& q() const { return q_; }
  int state_dim() const { return static_cast<int>(a_.rows()); }

 private:
  Eigen::MatrixXd a_;
  PsdMatrix q_;
};

struct CandidateSensor {
  Eigen::VectorXd c;
  double sigma2 = 1.0;
};

class SensorPool {
 public:
  explicit SensorPool(std::vector<CandidateSensor> sensors);

  int size() const { return static_cast<int>(sensors_.size()); }
  int state_dim() const { return static_cast<int>(sensors_.front().c.size()); }
  const CandidateSensor& sensor(int i) const { return sensors_.at(i); }
  const std::vector<CandidateSensor>& sensors() const { return sensors_; }
  // σ_i⁻² c_i c_iᵀ
  const SymmetricMatrix& information(int i) const { return info_.at(i); }
  // Candidates [first, first + count) as a standalone pool.
  SensorPool slice(int first, int count) const;

 private:
  std::vector<CandidateSensor> sensors_;
  std::vector<SymmetricMatrix> info_;
};

enum class SelectionKind { kHomogeneous, kHeterogeneous, kConstrained };

// A sequence of 0-based pool indices, repeats allowed. External formats are
// 1-based.
class Selection {
 public:
  Selection(std::vector<int> indices, SelectionKind kind,
            std::optional<long> rejection_count = std::nullopt);

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  SelectionKind kind() const { return kind_; }
  std::optional<long> rejection_count() const { return rejection_count_; }

  // Space-separated 1-based indices.
  std::string to_line() const;
  static Selection FromLine(const std::string& line, int pool_size,
                            SelectionKind kind = SelectionKind::kHomogeneous);

  bool operator==(const Selection&) const = default;

 private:
  std::vector<int> indices_;
  SelectionKind kind_;
  std::optional<long> rejection_count_;
};

// Contiguous, disjoint partitions covering the pool.
class Partitioning {
 public:
  Partitioning(std::vector<int> pool_sizes, std::vector<int> sample_sizes,
               std::vector<double> deltas);
  // K equal partitions with n_c/K candidates, n_s/K samples and per-partition
  // confidence 1 - (1 - δ)^(1/K). Throws ConfigError unless K divides both.
  static Partitioning Comparison(int n_c, int n_s, int k, double delta);

  int count() const { return static_cast<int>(pool_sizes_.size()); }
  int first(int i) const { return offsets_.at(i); }
  int pool_size(int i) const { return pool_sizes_.at(i); }
  int sample_size(int i) const { return sample_sizes_.at(i); }
  double delta(int i) const { return deltas_.at(i); }
  int total_pool_size() const;
  int total_sample_size() const;
  // Set only for comparison-mode partitionings.
  std::optional<double> total_delta() const { return total_delta_; }
  // Π(1 - δ_i); exactly 1 - δ in comparison mode.
  double joint_confidence() const;

 private:
  std::vector<int> pool_sizes_;
  std::vector<int> sample_sizes_;
  std::vector<double> deltas_;
  std::vector<int> offsets_;
  std::optional<double> total_delta_;
};

struct OutputModel {
  Eigen::MatrixXd c;     // n_s × m
  Eigen::VectorXd r;     // diagonal of R
};

OutputModel assemble_output(const SensorPool& pool, const Selection& sel);
// Σ_{i∈S} Z_i, i.e. CᵀR⁻¹C.
SymmetricMatrix information_sum(const SensorPool& pool,
                                const std::vector<int>& indices);
// Throws InvalidInputError unless p lies on the probability simplex.
void validate_distribution(const Eigen::VectorXd& p, int pool_size);
// Σ p_i Z_i
SymmetricMatrix expected_information(const SensorPool& pool,
                                     const Eigen::VectorXd& p);

// PBH test: rank [λI - A; C] = m for every eigenvalue |λ| >= 1.
bool pbh_detectable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c);

struct DetectabilityReport {
  std::vector<bool> candidate_detectable;
  bool every_candidate = false;       // each (A, c_i) detectable
  bool expected_information = false;  // (A, E[Z]^{1/2}) detectable
  std::vector<std::string> warnings;
};

DetectabilityReport check_detectability_conditions(const LtiSystem& system,
                                                   const SensorPool& pool,
                                                   const Eigen::VectorXd& p);

// Appends anchor indices whose stacked output is detectable.
Selection augment_selection(const LtiSystem& system, const SensorPool& pool,
                            const Selection& sel,
                            const std::vector<int>& anchor);

}  // namespace randsel
