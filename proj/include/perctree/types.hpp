#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace perctree {

/// Values within this window outside [0,1] clamp to the boundary (fixed-point
/// arithmetic drifts by ulps); anything further out is rejected.
inline constexpr double kProbabilityTol = 1e-12;

/// Largest offspring count (in-degree) accepted anywhere. Direct binomial
/// summation stays accurate in double precision up to this bound.
inline constexpr int kMaxOffspring = 64;

/// A real number constrained to [0,1], validated at construction.
class Probability {
 public:
  constexpr Probability() = default;

  Probability(double value) : value_(validate(value)) {}

  double value() const { return value_; }
  operator double() const { return value_; }

 private:
  static double validate(double v) {
    if (!(v >= -kProbabilityTol && v <= 1.0 + kProbabilityTol)) {
      throw std::domain_error("probability out of range: " + std::to_string(v));
    }
    return std::min(std::max(v, 0.0), 1.0);
  }

  double value_ = 0.0;
};

/// An l-periodic tree: a node at depth d has offspring[d mod l] children.
/// In the unoriented tree a class-k node has degree m_k + 1; in the oriented
/// tree it has in-degree m_k and out-degree 1.
class TreeSpec {
 public:
  explicit TreeSpec(std::vector<int> offspring) : offspring_(std::move(offspring)) {
    if (offspring_.empty()) {
      throw std::invalid_argument("tree spec needs at least one offspring count");
    }
    for (int m : offspring_) {
      if (m < 1 || m > kMaxOffspring) {
        throw std::invalid_argument("offspring count " + std::to_string(m) +
                                    " outside [1, " + std::to_string(kMaxOffspring) + "]");
      }
    }
    auto [lo, hi] = std::minmax_element(offspring_.begin(), offspring_.end());
    min_ = *lo;
    max_ = *hi;
  }

  TreeSpec(std::initializer_list<int> offspring) : TreeSpec(std::vector<int>(offspring)) {}

  int period() const { return static_cast<int>(offspring_.size()); }
  const std::vector<int>& offspring() const { return offspring_; }

  /// Offspring count of class (k mod period); accepts any nonnegative k.
  int offspring_at(int k) const { return offspring_[static_cast<std::size_t>(k) % offspring_.size()]; }

  int min_offspring() const { return min_; }
  int max_offspring() const { return max_; }

  /// Strict mode is the hypothesis under which the analytic thresholds are
  /// established: 2 <= theta < every offspring count.
  bool strict_theta(int theta) const { return theta >= 2 && theta < min_; }

  TreeSpec rotated(int shift) const {
    std::vector<int> out(offspring_.size());
    for (std::size_t k = 0; k < offspring_.size(); ++k) {
      out[k] = offspring_[(k + static_cast<std::size_t>(shift)) % offspring_.size()];
    }
    return TreeSpec(std::move(out));
  }

  bool operator==(const TreeSpec&) const = default;

 private:
  std::vector<int> offspring_;
  int min_ = 0;
  int max_ = 0;
};

}  // namespace perctree
