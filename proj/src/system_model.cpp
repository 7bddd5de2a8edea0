#include "randsel/system_model.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>

#include "randsel/errors.hpp"

namespace randsel {

LtiSystem::LtiSystem(Eigen::MatrixXd a, SymmetricMatrix q) : a_(std::move(a)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) {
    throw DimensionError("A must be square and non-empty");
  }
  if (q.order() != a_.rows()) throw DimensionError("Q must match A");
  if (!a_.allFinite()) throw InvalidInputError("A has non-finite entries");
  if (!(min_eigenvalue(q) > 0.0)) {
    throw InvalidInputError("Q must be positive definite");
  }
  q_ = PsdMatrix::Trusted(std::move(q));
}

SensorPool::SensorPool(std::vector<CandidateSensor> sensors)
    : sensors_(std::move(sensors)) {
  if (sensors_.empty()) throw InvalidInputError("sensor pool is empty");
  const Eigen::Index m = sensors_.front().c.size();
  if (m == 0) throw DimensionError("sensor vectors are empty");
  for (std::size_t i = 0; i < sensors_.size(); ++i) {
    const auto& s = sensors_[i];
    if (s.c.size() != m) throw DimensionError("sensor vector length mismatch");
    if (!s.c.allFinite() || !std::isfinite(s.sigma2) || !(s.sigma2 > 0.0)) {
      throw InvalidInputError("sensor " + std::to_string(i + 1) +
                              ": need finite c and sigma2 > 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (sensors_[j].sigma2 == s.sigma2 && sensors_[j].c == s.c) {
        throw InvalidInputError("sensors " + std::to_string(j + 1) + " and " +
                                std::to_string(i + 1) + " are identical");
      }
    }
    info_.push_back(SymmetricMatrix::Outer(s.c, 1.0 / s.sigma2));
  }
}

SensorPool SensorPool::slice(int first, int count) const {
  if (first < 0 || count < 1 || first + count > size()) {
    throw DimensionError("pool slice out of range");
  }
  return SensorPool(std::vector<CandidateSensor>(
      sensors_.begin() + first, sensors_.begin() + first + count));
}

Selection::Selection(std::vector<int> indices, SelectionKind kind,
                     std::optional<long> rejection_count)
    : indices_(std::move(indices)),
      kind_(kind),
      rejection_count_(rejection_count) {
  for (int i : indices_) {
    if (i < 0) throw InvalidInputError("negative selection index");
  }
  if ((kind_ == SelectionKind::kConstrained) != rejection_count_.has_value()) {
    throw InvalidInputError(
        "rejection count is required for, and only for, constrained selections");
  }
  if (rejection_count_ && *rejection_count_ < 1) {
    throw InvalidInputError("rejection count must be at least 1");
  }
}

std::string Selection::to_line() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) out << ' ';
    out << indices_[i] + 1;
  }
  return out.str();
}

Selection Selection::FromLine(const std::string& line, int pool_size,
                              SelectionKind kind) {
  std::istringstream in(line);
  std::vector<int> idx;
  long v;
  while (in >> v) {
    if (v < 1 || v > pool_size) {
      throw InvalidInputError("selection index " + std::to_string(v) +
                              " outside [1, " + std::to_string(pool_size) + "]");
    }
    idx.push_back(static_cast<int>(v - 1));
  }
  if (!in.eof()) throw InvalidInputError("malformed selection line");
  std::optional<long> n;
  if (kind == SelectionKind::kConstrained) n = 1;
  return Selection(std::move(idx), kind, n);
}

Partitioning::Partitioning(std::vector<int> pool_sizes,
                           std::vector<int> sample_sizes,
                           std::vector<double> deltas)
    : pool_sizes_(std::move(pool_sizes)),
      sample_sizes_(std::move(sample_sizes)),
      deltas_(std::move(deltas)) {
  if (pool_sizes_.empty()) throw InvalidInputError("no partitions");
  if (sample_sizes_.size() != pool_sizes_.size() ||
      deltas_.size() != pool_sizes_.size()) {
    throw DimensionError("partition field lengths differ");
  }
  int offset = 0;
  for (std::size_t i = 0; i < pool_sizes_.size(); ++i) {
    if (pool_sizes_[i] < 1 || sample_sizes_[i] < 1) {
      throw InvalidInputError("partition sizes must be positive");
    }
    if (!(deltas_[i] > 0.0 && deltas_[i] < 1.0)) {
      throw DomainError("partition delta must lie in (0, 1)");
    }
    offsets_.push_back(offset);
    offset += pool_sizes_[i];
  }
}

Partitioning Partitioning::Comparison(int n_c, int n_s, int k, double delta) {
  if (k < 1) throw ConfigError("K must be positive");
  if (n_c % k != 0 || n_s % k != 0) {
    throw ConfigError("K = " + std::to_string(k) + " must divide n_c = " +
                      std::to_string(n_c) + " and n_s = " +
                      std::to_string(n_s));
  }
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const double di = k == 1 ? delta : -std::expm1(std::log1p(-delta) / k);
  Partitioning out(std::vector<int>(k, n_c / k), std::vector<int>(k, n_s / k),
                   std::vector<double>(k, di));
  out.total_delta_ = delta;
  return out;
}

int Partitioning::total_pool_size() const {
  return std::accumulate(pool_sizes_.begin(), pool_sizes_.end(), 0);
}

int Partitioning::total_sample_size() const {
  return std::accumulate(sample_sizes_.begin(), sample_sizes_.end(), 0);
}

double Partitioning::joint_confidence() const {
  // In comparison mode the per-partition deltas are rounded images of
  // 1 - (1-δ)^(1/K), whose product is 1 - δ exactly.
  if (total_delta_) return 1.0 - *total_delta_;
  double prod = 1.0;
  for (double d : deltas_) prod *= 1.0 - d;
  return prod;
}

OutputModel assemble_output(const SensorPool& pool, const Selection& sel) {
  const int m = pool.state_dim();
  OutputModel out{Eigen::MatrixXd(sel.size(), m), Eigen::VectorXd(sel.size())};
  for (int i = 0; i < sel.size(); ++i) {
    const int j = sel.indices()[i];
    if (j >= pool.size()) throw DimensionError("selection index out of range");
    out.c.row(i) = pool.sensor(j).c.transpose();
    out.r(i) = pool.sensor(j).sigma2;
  }
  return out;
}

SymmetricMatrix information_sum(const SensorPool& pool,
                                const std::vector<int>& indices) {
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(pool.state_dim(), pool.state_dim());
  for (int j : indices) {
    if (j < 0 || j >= pool.size()) throw DimensionError("index out of range");
    sum += pool.information(j).matrix();
  }
  return SymmetricMatrix(sum);
}

void validate_distribution(const Eigen::VectorXd& p, int pool_size) {
  if (p.size() != pool_size) {
    throw DimensionError("distribution length " + std::to_string(p.size()) +
                         " does not match pool size " +
                         std::to_string(pool_size));
  }
  if (!p.allFinite() || (p.array() < 0.0).any()) {
    throw InvalidInputError("distribution has negative or non-finite entries");
  }
  if (std::abs(p.sum() - 1.0) > 1e-9) {
    throw InvalidInputError("distribution does not sum to one");
  }
}

SymmetricMatrix expected_information(const SensorPool& pool,
                                     const Eigen::VectorXd& p) {
  validate_distribution(p, pool.size());
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(pool.state_dim(), pool.state_dim());
  for (int i = 0; i < pool.size(); ++i) {
    if (p(i) != 0.0) e += p(i) * pool.information(i).matrix();
  }
  return SymmetricMatrix(e);
}

bool pbh_detectable(const Eigen::MatrixXd& a, const Eigen::MatrixXd& c) {
  const Eigen::Index m = a.rows();
  if (a.cols() != m || (c.rows() > 0 && c.cols() != m)) {
    throw DimensionError("pbh_detectable: incompatible shapes");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  Eigen::MatrixXcd stacked(m + c.rows(), m);
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev(k)) < 1.0) continue;
    stacked.topRows(m) = ev(k) * Eigen::MatrixXcd::Identity(m, m) - a.cast<std::complex<double>>();
    stacked.bottomRows(c.rows()) = c.cast<std::complex<double>>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cutoff = kRankCutoff * std::max(sv(0), 1e-300);
    if ((sv.array() > cutoff).count() < m) return false;
  }
  return true;
}

DetectabilityReport check_detectability_conditions(const LtiSystem& system,
                                                   const SensorPool& pool,
                                                   const Eigen::VectorXd& p) {
  DetectabilityReport r;
  r.every_candidate = true;
  for (int i = 0; i < pool.size(); ++i) {
    const bool ok = pbh_detectable(system.a(), pool.sensor(i).c.transpose());
    r.candidate_detectable.push_back(ok);
    r.every_candidate = r.every_candidate && ok;
  }
  const SymmetricMatrix root = symmetric_sqrt(expected_information(pool, p));
  r.expected_information = pbh_detectable(system.a(), root.matrix());
  if (!r.expected_information) {
    r.warnings.push_back("(A, E[Z]^{1/2}) is not detectable; bounds do not apply");
  }
  if (!r.every_candidate) {
    r.warnings.push_back(
        "some candidate pair (A, c_i) is undetectable; detectability of "
        "sampled selections is not certified (add an anchor selection)");
  }
  return r;
}

Selection augment_selection(const LtiSystem& system, const SensorPool& pool,
                            const Selection& sel,
                            const std::vector<int>& anchor) {
  if (anchor.empty()) return sel;
  Selection anchor_sel(anchor, SelectionKind::kHomogeneous);
  if (!pbh_detectable(system.a(), assemble_output(pool, anchor_sel).c)) {
    throw PreconditionError("anchor selection is not detectable");
  }
  std::vector<int> idx = sel.indices();
  idx.insert(idx.end(), anchor.begin(), anchor.end());
  return Selection(std::move(idx), sel.kind(), sel.rejection_count());
}

}  // namespace randsel
