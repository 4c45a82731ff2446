#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "perctree/types.hpp"

namespace perctree {

inline constexpr std::size_t kMaxTreeNodes = 100'000'000;
/// Exhaustive enumeration walks all 2^N initial configurations.
inline constexpr int kMaxExactNodes = 24;
inline constexpr std::int64_t kMinTrials = 100;

enum class Orientation { kOriented, kUnoriented };
const char* to_string(Orientation o);

inline constexpr std::uint32_t kNoParent = 0xFFFFFFFFu;

/// Finite truncation of a periodic tree, breadth-first node order. The root
/// (id 0) has class 0 and depth 0; a node at depth d has class d mod period
/// and, below the depth limit, exactly offspring[class] children stored
/// contiguously. Leaves at the depth limit have none.
class TruncatedTree {
 public:
  TruncatedTree(TreeSpec spec, int depth_limit, Orientation orientation);

  const TreeSpec& spec() const { return spec_; }
  int depth_limit() const { return depth_limit_; }
  Orientation orientation() const { return orientation_; }
  std::size_t node_count() const { return parent_.size(); }
  std::uint32_t root() const { return 0; }

  std::uint32_t parent_of(std::uint32_t id) const { return parent_[id]; }
  std::uint32_t first_child(std::uint32_t id) const { return child_offset_[id]; }
  std::uint32_t child_count(std::uint32_t id) const {
    return child_offset_[id + 1] - child_offset_[id];
  }
  int depth_of(std::uint32_t id) const;
  int class_of(std::uint32_t id) const { return depth_of(id) % spec_.period(); }

  /// First node id at each depth; size depth_limit + 2.
  const std::vector<std::size_t>& level_offsets() const { return level_offset_; }

 private:
  TreeSpec spec_;
  int depth_limit_;
  Orientation orientation_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> child_offset_;  // CSR: children of i are [off[i], off[i+1])
  std::vector<std::size_t> level_offset_;
};

/// Errors with std::length_error when the projected node count exceeds
/// kMaxTreeNodes.
TruncatedTree build_truncated(const TreeSpec& spec, int depth, Orientation orientation);

struct BPRun {
  std::vector<bool> initial;
  std::vector<bool> final_state;
  int rounds = 0;  // synchronous update rounds until stable
};

/// Synchronous bootstrap percolation until stable. Oriented mode counts a
/// node's children only (in-neighbors); unoriented mode counts children plus
/// parent. Oriented leaves keep their initial state forever.
BPRun run_bp(const TruncatedTree& tree, const std::vector<bool>& initial, int theta);

struct MCEstimate {
  Probability mean;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::string rng;  // generator algorithm identifier
};

/// Monte Carlo estimate of the root activation probability under Bernoulli(p)
/// initial states. Reproducible given the seed: trial i derives its own
/// splitmix64 stream, so results do not depend on the job count.
MCEstimate mc_root_activation(const TreeSpec& spec, int theta, Probability p, int depth,
                              Orientation orientation, std::int64_t trials, std::uint64_t seed,
                              int jobs = 1);

/// Exact root activation probability: the sum over all 2^N initial
/// configurations of their Bernoulli(p) weight times the indicator that the
/// root ends active. Errors when the tree has more than kMaxExactNodes nodes.
Probability exact_root_activation(const TreeSpec& spec, int theta, Probability p, int depth,
                                  Orientation orientation);

/// Configuration counts behind the exact probability: entry k is the number
/// of initial configurations with exactly k active nodes whose final state
/// has an active root. exact_root_activation(p) = sum_k counts[k] p^k (1-p)^(N-k).
std::vector<double> exact_activation_profile(const TreeSpec& spec, int theta, int depth,
                                             Orientation orientation);

}  // namespace perctree
