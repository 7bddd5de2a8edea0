#include "randsel/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "randsel/errors.hpp"

namespace randsel {

namespace {
constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RngStream RngStream::substream(std::uint64_t index) const {
  return RngStream(mix64(mix64(seed_) ^ mix64(index + kGamma)));
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGamma);
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidInputError("next_below: empty range");
  // Rejection on the top of the range removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % bound;
}

CategoricalSampler::CategoricalSampler(const Eigen::VectorXd& p) : p_(p) {
  validate_distribution(p, static_cast<int>(p.size()));
  cdf_.resize(p.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) cdf_[i] = acc += p(i);
  Eigen::Index last = p.size() - 1;
  while (p(last) == 0.0) --last;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    cdf_[i] = i >= last ? 1.0 : cdf_[i] / acc;
  }
}

int CategoricalSampler::index_for(double u) const {
  if (!(u >= 0.0 && u < 1.0)) throw DomainError("uniform variate outside [0, 1)");
  return static_cast<int>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

Selection draw_homogeneous(const CategoricalSampler& sampler, int n_s, RngStream& rng) {
  if (n_s < 1) throw DomainError("n_s must be positive");
  std::vector<int> idx(n_s);
  for (int& i : idx) i = sampler.draw(rng);
  return Selection(std::move(idx), SelectionKind::kHomogeneous);
}

Selection draw_constrained(const CategoricalSampler& sampler, int n_s,
                           const ConstraintSpec& spec, RngStream& rng,
                           std::optional<long> max_attempts) {
  const double a = alpha(spec, n_s, sampler.probabilities());
  const long budget = max_attempts.value_or(
      a > 0.0 ? static_cast<long>(std::ceil(50.0 / a)) : 1000000L);
  if (budget < 1) throw InvalidInputError("max_attempts must be positive");
  std::vector<int> idx(n_s);
  std::vector<int> counts(sampler.size());
  for (long attempt = 1; attempt <= budget; ++attempt) {
    std::fill(counts.begin(), counts.end(), 0);
    bool ok = true;
    for (int& i : idx) {
      i = sampler.draw(rng);
      ok = ok && ++counts[i] <= spec.caps()[i];
    }
    if (ok) return Selection(idx, SelectionKind::kConstrained, attempt);
  }
  throw RejectionBudgetError("no draw satisfied the caps within " + std::to_string(budget) +
                                 " attempts",
                             a, budget);
}

Selection draw_heterogeneous(const Partitioning& partitioning,
                             const std::vector<CategoricalSampler>& samplers,
                             RngStream& rng) {
  if (static_cast<int>(samplers.size()) != partitioning.count()) {
    throw DimensionError("need one sampler per partition");
  }
  std::vector<int> idx;
  idx.reserve(partitioning.total_sample_size());
  for (int i = 0; i < partitioning.count(); ++i) {
    if (samplers[i].size() != partitioning.pool_size(i)) {
      throw DimensionError("sampler " + std::to_string(i + 1) + " has the wrong size");
    }
    for (int k = 0; k < partitioning.sample_size(i); ++k) {
      idx.push_back(partitioning.first(i) + samplers[i].draw(rng));
    }
  }
  return Selection(std::move(idx), SelectionKind::kHeterogeneous);
}

}  // namespace randsel
