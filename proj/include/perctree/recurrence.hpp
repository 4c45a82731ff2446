#pragma once

#include <cstdint>
#include <vector>

#include "perctree/types.hpp"

namespace perctree {

/// Fixed-point stopping tolerance on the max entrywise step change.
inline constexpr double kFixedPointTol = 1e-13;
inline constexpr std::uint64_t kIterationCap = 1'000'000;

/// Reporting tolerance for "the limit reached 1". Threshold classification
/// never relies on this alone.
inline constexpr double kEpsOne = 1e-9;

/// Per-class activation probabilities at time t. Entry k is the activation
/// probability of a node whose in-degree is offspring[k]; its in-neighbors
/// belong to class (k+1) mod period.
struct OrientedState {
  std::uint64_t t = 0;
  std::vector<Probability> probs;
};

/// All-p state at t = 0.
OrientedState initial_state(const TreeSpec& spec, Probability p);

struct IterationControl {
  double tol = kFixedPointTol;
  std::uint64_t cap = kIterationCap;
};

struct LimitResult {
  std::vector<Probability> limits;
  std::uint64_t iterations = 0;
  bool converged = false;
  double residual = 0.0;  // max entrywise change at the last step

  bool all_one(double eps = kEpsOne) const {
    for (const auto& v : limits) {
      if (v < 1.0 - eps) return false;
    }
    return true;
  }
};

/// One synchronous update: entry k becomes phi_{m_k,p,theta} of the previous
/// entry of class (k+1) mod period. Entrywise nondecreasing when the input
/// state dominates its own predecessor. Requires theta >= 2; classes with
/// theta > m_k saturate at p (they can only activate initially).
OrientedState step(const TreeSpec& spec, int theta, Probability p, const OrientedState& state);

/// Iterate from the all-p state until the max entrywise change drops below
/// control.tol or control.cap steps have run. Non-convergence is reported via
/// the flag, not an error.
LimitResult iterate_to_limit(const TreeSpec& spec, int theta, Probability p,
                             const IterationControl& control = {});

/// One-period composite psi_k = phi_{m_k} o phi_{m_{k+1}} o ... o phi_{m_{k+l-1}}
/// (indices mod period). The per-class limits are fixed points of their psi_k.
Probability composite_map(const TreeSpec& spec, int theta, Probability p, int class_index,
                          Probability x);

}  // namespace perctree
