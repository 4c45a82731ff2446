#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "perctree/phi.hpp"
#include "perctree/recurrence.hpp"
#include "perctree/types.hpp"

namespace perctree {

/// Target width for p-brackets.
inline constexpr double kDefaultEpsP = 1e-9;
/// Uniform scan resolution for the full-activity criterion.
inline constexpr int kScanGrid = 10'000;
/// Excluded neighborhood of x = 1 in displacement scans (psi(1) - 1 = 0
/// identically, so the trivial fixed point must not shadow interior roots).
inline constexpr double kBoundaryDelta = 1e-12;
/// Width to which scan minima and root brackets are refined.
inline constexpr double kRefineWidth = 1e-12;
/// Widening applied to each side of the sandwich bisection bracket.
inline constexpr double kBracketWiden = 1e-6;

enum class Criterion { kRootScan, kIteration, kBothAgree };
const char* to_string(Criterion c);

/// Raised when the scan-based full-activity criterion and the fixed-point
/// iteration classify a parameter point differently; signals tolerance
/// misconfiguration near tangency.
class CriterionDisagreement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ThresholdOptions {
  double eps_p = kDefaultEpsP;
  int scan_grid = kScanGrid;
  Criterion criterion = Criterion::kBothAgree;
  IterationControl iteration{};
};

struct RootScanResult {
  int count = 0;
  std::vector<double> roots;
  std::vector<std::pair<double, double>> brackets;
};

/// Sign-change roots of Phi_p on (0,1): uniform scan over grid_size cells,
/// then bisection to kRefineWidth. Tangent double roots do not change sign
/// and are invisible to the scan. Requires grid_size >= 100.
RootScanResult count_roots(const PhiParams& params, int grid_size);

struct TangencyResult {
  Probability p_c;
  Probability x_tangent;
  int newton_iters = 0;
  double residual_phi = 0.0;    // |phi(x) - x| at the solution
  double residual_slope = 0.0;  // |phi'(x) - 1| at the solution
  bool used_fallback = false;
};

/// Critical probability of the regular tree: solves phi(x) = x, phi'(x) = 1
/// by damped Newton from (p, x) = (0.1, x*/2), falling back to nested
/// bisection (outer on p via the sign of min_x Phi_p, inner scan) plus a
/// Newton polish. Requires 2 <= theta <= n-1.
TangencyResult find_pc_regular(int n, int theta);

struct SupercriticalCertificate {
  bool supercritical = false;
  double min_x = 0.0;   // minimizer of psi_0(x) - x over (0, 1-delta]
  double margin = 0.0;  // value of the minimum
  bool iteration_checked = false;
  LimitResult iteration;
};

/// Full-activity test at initial probability p. Authoritative criterion:
/// min over (0, 1-delta] of composite_map displacement psi_0(x) - x is
/// strictly positive (scan + local refinement). Cross-checked against
/// iterate_to_limit under Criterion::kBothAgree; disagreement throws.
/// Requires strict mode (2 <= theta < min offspring).
SupercriticalCertificate is_supercritical(const TreeSpec& spec, int theta, Probability p,
                                          const ThresholdOptions& options = {});

/// Starting bisection bracket (lower from the max offspring count, upper from
/// the min), each widened by kBracketWiden.
std::pair<Probability, Probability> sandwich_bounds(const TreeSpec& spec, int theta);

struct ThresholdResult {
  Probability p_low;   // largest tested subcritical p
  Probability p_high;  // smallest tested supercritical p
  Probability p_est;   // midpoint
  Criterion criterion = Criterion::kBothAgree;
  int evaluations = 0;
};

/// Bisection for the full-activation threshold over the sandwich bracket,
/// down to options.eps_p. The bracket endpoints are verified; results are
/// brackets, never a certification of p = p_f itself.
ThresholdResult find_pf(const TreeSpec& spec, int theta, const ThresholdOptions& options = {});

struct UnorientedLimits {
  Probability x_inf;  // degree-(a+1) class
  Probability y_inf;  // degree-(b+1) class
  LimitResult oriented;
};

/// Limit activation probabilities on the unoriented two-periodic tree from
/// the oriented limits: x_inf = p + (1-p) P(Bin(a+1, y_or) >= theta) and
/// symmetrically for y_inf. Dominates the oriented limits entrywise.
UnorientedLimits unoriented_limits(int a, int b, int theta, Probability p,
                                   const ThresholdOptions& options = {});

}  // namespace perctree
