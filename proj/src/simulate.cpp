#include "perctree/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "perctree/rng.hpp"

namespace perctree {

namespace {

// Frontier-based synchronous BP on reusable buffers. Only nodes with a newly
// activated neighbor are re-examined.
class BpEngine {
 public:
  explicit BpEngine(const TruncatedTree& tree)
      : tree_(tree),
        unoriented_(tree.orientation() == Orientation::kUnoriented),
        active_(tree.node_count()),
        counts_(tree.node_count()),
        frontier_(),
        next_() {
    frontier_.reserve(tree.node_count());
    next_.reserve(tree.node_count());
  }

  std::vector<std::uint8_t>& initial() { return active_; }

  // Runs to stability in place; returns rounds. Assumes active_ holds the
  // initial configuration.
  int run(int theta, bool stop_at_root = false) {
    const std::size_t n = tree_.node_count();
    std::fill(counts_.begin(), counts_.end(), std::uint8_t{0});
    frontier_.clear();
    for (std::uint32_t i = 0; i < n; ++i) {
      if (active_[i]) frontier_.push_back(i);
    }

    int rounds = 0;
    while (!frontier_.empty()) {
      if (stop_at_root && active_[0]) break;
      next_.clear();
      for (std::uint32_t u : frontier_) {
        bump(tree_.parent_of(u), theta);
        if (unoriented_) {
          const std::uint32_t first = tree_.first_child(u);
          const std::uint32_t cnt = tree_.child_count(u);
          for (std::uint32_t c = 0; c < cnt; ++c) bump(first + c, theta);
        }
      }
      frontier_.swap(next_);
      if (!frontier_.empty()) ++rounds;
    }
    return rounds;
  }

 private:
  void bump(std::uint32_t v, int theta) {
    if (v == kNoParent) return;
    if (++counts_[v] >= theta && !active_[v]) {
      active_[v] = 1;
      next_.push_back(v);
    }
  }

  const TruncatedTree& tree_;
  bool unoriented_;
  std::vector<std::uint8_t> active_;
  std::vector<std::uint8_t> counts_;
  std::vector<std::uint32_t> frontier_;
  std::vector<std::uint32_t> next_;
};

void check_theta_positive(int theta) {
  if (theta < 1) throw std::invalid_argument("bootstrap percolation needs theta >= 1");
}

}  // namespace

const char* to_string(Orientation o) {
  return o == Orientation::kOriented ? "oriented" : "unoriented";
}

TruncatedTree::TruncatedTree(TreeSpec spec, int depth_limit, Orientation orientation)
    : spec_(std::move(spec)), depth_limit_(depth_limit), orientation_(orientation) {
  if (depth_limit_ < 0) throw std::invalid_argument("build_truncated: depth must be >= 0");

  level_offset_.resize(static_cast<std::size_t>(depth_limit_) + 2);
  level_offset_[0] = 0;
  std::uint64_t level = 1;
  std::uint64_t total = 0;
  for (int d = 0; d <= depth_limit_; ++d) {
    total += level;
    if (total > kMaxTreeNodes) {
      throw std::length_error("build_truncated: projected node count exceeds " +
                              std::to_string(kMaxTreeNodes));
    }
    level_offset_[static_cast<std::size_t>(d) + 1] = total;
    level *= static_cast<std::uint64_t>(spec_.offspring_at(d));
  }

  parent_.resize(total);
  child_offset_.resize(total + 1);
  parent_[0] = kNoParent;
  std::uint32_t next_child = 1;
  for (int d = 0; d <= depth_limit_; ++d) {
    const int m = (d < depth_limit_) ? spec_.offspring_at(d) : 0;
    for (std::size_t i = level_offset_[d]; i < level_offset_[d + 1]; ++i) {
      child_offset_[i] = next_child;
      for (int c = 0; c < m; ++c) parent_[next_child + static_cast<std::uint32_t>(c)] = static_cast<std::uint32_t>(i);
      next_child += static_cast<std::uint32_t>(m);
    }
  }
  child_offset_[total] = next_child;
}

int TruncatedTree::depth_of(std::uint32_t id) const {
  const auto it = std::upper_bound(level_offset_.begin(), level_offset_.end(), static_cast<std::size_t>(id));
  return static_cast<int>(it - level_offset_.begin()) - 1;
}

TruncatedTree build_truncated(const TreeSpec& spec, int depth, Orientation orientation) {
  return TruncatedTree(spec, depth, orientation);
}

BPRun run_bp(const TruncatedTree& tree, const std::vector<bool>& initial, int theta) {
  check_theta_positive(theta);
  if (initial.size() != tree.node_count()) {
    throw std::invalid_argument("run_bp: initial configuration has wrong length");
  }

  BpEngine engine(tree);
  auto& state = engine.initial();
  for (std::size_t i = 0; i < initial.size(); ++i) state[i] = initial[i] ? 1 : 0;

  BPRun out;
  out.initial = initial;
  out.rounds = engine.run(theta);
  out.final_state.resize(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) out.final_state[i] = state[i] != 0;
  return out;
}

MCEstimate mc_root_activation(const TreeSpec& spec, int theta, Probability p, int depth,
                              Orientation orientation, std::int64_t trials, std::uint64_t seed,
                              int jobs) {
  check_theta_positive(theta);
  if (trials < kMinTrials) {
    throw std::invalid_argument("mc_root_activation: trials must be >= " + std::to_string(kMinTrials));
  }

  const TruncatedTree tree = build_truncated(spec, depth, orientation);
  const std::size_t n = tree.node_count();
  const double pv = p;
  const bool none = pv <= 0.0;
  const bool all = pv >= 1.0;
  const std::uint64_t threshold = (none || all) ? 0 : rng::bernoulli_threshold(pv);

  jobs = std::max(1, jobs);
  jobs = static_cast<int>(std::min<std::int64_t>(jobs, trials));

  std::atomic<std::int64_t> total_hits{0};
  auto worker = [&](std::int64_t t0, std::int64_t t1) {
    BpEngine engine(tree);
    std::int64_t hits = 0;
    for (std::int64_t t = t0; t < t1; ++t) {
      auto& state = engine.initial();
      rng::SplitMix64 g = rng::trial_stream(seed, static_cast<std::uint64_t>(t));
      for (std::size_t i = 0; i < n; ++i) {
        state[i] = all ? 1 : (none ? 0 : (g.next() < threshold ? 1 : 0));
      }
      engine.run(theta, /*stop_at_root=*/true);
      hits += state[0];
    }
    total_hits += hits;
  };

  if (jobs == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    const std::int64_t chunk = (trials + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const std::int64_t t0 = j * chunk;
      const std::int64_t t1 = std::min<std::int64_t>(t0 + chunk, trials);
      if (t0 >= t1) break;
      pool.emplace_back(worker, t0, t1);
    }
    for (auto& th : pool) th.join();
  }

  MCEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.rng = rng::kAlgorithm;
  const double mean = static_cast<double>(total_hits.load()) / static_cast<double>(trials);
  est.mean = Probability(mean);
  est.std_error = std::sqrt(mean * (1.0 - mean) / static_cast<double>(trials));
  return est;
}

std::vector<double> exact_activation_profile(const TreeSpec& spec, int theta, int depth,
                                             Orientation orientation) {
  check_theta_positive(theta);
  const TruncatedTree tree = build_truncated(spec, depth, orientation);
  const int n = static_cast<int>(tree.node_count());
  if (n > kMaxExactNodes) {
    throw std::length_error("exact enumeration limited to " + std::to_string(kMaxExactNodes) +
                            " nodes, tree has " + std::to_string(n));
  }

  // Per-node mask of the neighbors whose activity is counted.
  std::vector<std::uint32_t> nb_mask(static_cast<std::size_t>(n), 0);
  for (std::uint32_t i = 0; i < static_cast<std::uint32_t>(n); ++i) {
    const std::uint32_t first = tree.first_child(i);
    const std::uint32_t cnt = tree.child_count(i);
    for (std::uint32_t c = 0; c < cnt; ++c) nb_mask[i] |= (1u << (first + c));
    if (orientation == Orientation::kUnoriented && tree.parent_of(i) != kNoParent) {
      nb_mask[i] |= (1u << tree.parent_of(i));
    }
  }

  std::vector<double> counts(static_cast<std::size_t>(n) + 1, 0.0);
  const std::uint32_t end = (n == 32) ? 0 : (1u << n);  // n <= 24, no wrap
  std::uint32_t config = 0;
  do {
    std::uint32_t state = config;
    if (orientation == Orientation::kOriented) {
      // Children precede nothing: BFS order puts children after parents, so a
      // single descending pass settles every node from the leaves up.
      for (int i = n - 1; i >= 0; --i) {
        if (!(state >> i & 1u) &&
            std::popcount(state & nb_mask[static_cast<std::size_t>(i)]) >= theta) {
          state |= (1u << i);
        }
      }
    } else {
      bool changed = true;
      while (changed) {
        changed = false;
        std::uint32_t next = state;
        for (int i = 0; i < n; ++i) {
          if (!(state >> i & 1u) &&
              std::popcount(state & nb_mask[static_cast<std::size_t>(i)]) >= theta) {
            next |= (1u << i);
            changed = true;
          }
        }
        state = next;
      }
    }
    if (state & 1u) counts[static_cast<std::size_t>(std::popcount(config))] += 1.0;
    ++config;
  } while (config != end);

  return counts;
}

Probability exact_root_activation(const TreeSpec& spec, int theta, Probability p, int depth,
                                  Orientation orientation) {
  const std::vector<double> counts = exact_activation_profile(spec, theta, depth, orientation);
  const int n = static_cast<int>(counts.size()) - 1;
  const double pv = p;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0.0) continue;
    total += counts[static_cast<std::size_t>(k)] * std::pow(pv, k) * std::pow(1.0 - pv, n - k);
  }
  return Probability(std::min(total, 1.0));
}

}  // namespace perctree
