#include "perctree/threshold.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace perctree {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;

struct ScanMin {
  double x = 0.0;
  double value = std::numeric_limits<double>::infinity();
};

// Uniform scan of f over (0, 1-delta] followed by golden-section refinement
// around the best cell, down to bracket width kRefineWidth.
template <typename F>
ScanMin scan_minimum(F&& f, int grid, double delta) {
  ScanMin best;
  const double g = static_cast<double>(grid);
  double best_lo = 0.0, best_hi = 1.0 - delta;
  for (int i = 1; i <= grid; ++i) {
    const double x = (i == grid) ? 1.0 - delta : static_cast<double>(i) / g;
    const double v = f(x);
    if (v < best.value) {
      best = {x, v};
      best_lo = std::max(static_cast<double>(i - 1) / g, 0.0);
      best_hi = std::min(static_cast<double>(i + 1) / g, 1.0 - delta);
    }
  }

  double a = best_lo, b = best_hi;
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > kRefineWidth) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
    }
  }
  const double xm = 0.5 * (a + b);
  const double vm = f(xm);
  if (vm < best.value) best = {xm, vm};
  if (f1 < best.value) best = {x1, f1};
  if (f2 < best.value) best = {x2, f2};
  return best;
}

double composite_raw(const TreeSpec& spec, int theta, double p, double x) {
  double v = x;
  for (int j = spec.period() - 1; j >= 0; --j) {
    v = detail::activation(spec.offspring_at(j), theta, p, v);
  }
  return v;
}

void require_strict(const TreeSpec& spec, int theta, const char* who) {
  if (!spec.strict_theta(theta)) {
    std::ostringstream msg;
    msg << who << ": strict mode requires 2 <= theta < min offspring (theta=" << theta
        << ", min=" << spec.min_offspring() << ")";
    throw std::invalid_argument(msg.str());
  }
}

// Deepest interior value of Phi_p for the regular tree; its sign classifies p
// against p_c.
ScanMin min_big_phi(int n, int theta, double p, int grid) {
  auto f = [&](double x) { return detail::activation(n, theta, p, x) - x; };
  return scan_minimum(f, grid, kBoundaryDelta);
}

struct NewtonPoint {
  double p, x;
  double f1, f2;  // (phi(x) - x, phi'(x) - 1)
  double norm() const { return std::max(std::abs(f1), std::abs(f2)); }
};

NewtonPoint eval_tangency(int n, int theta, double p, double x) {
  NewtonPoint pt;
  pt.p = p;
  pt.x = x;
  pt.f1 = detail::activation(n, theta, p, x) - x;
  pt.f2 = detail::activation_slope(n, theta, p, x) - 1.0;
  return pt;
}

// Damped Newton on (Phi, Phi') with step halving; returns false when stuck.
bool newton_tangency(int n, int theta, NewtonPoint& pt, int max_iters, int& iters_used) {
  const double coeff = static_cast<double>(n) * detail::binom_coefficient(n - 1, theta - 1);
  for (int it = 0; it < max_iters; ++it) {
    if (pt.norm() <= 1e-14) {
      iters_used += it;
      return true;
    }
    const double tail = detail::binom_tail_raw(n, theta, pt.x);
    const double slope = coeff * std::pow(pt.x, theta - 1) * std::pow(1.0 - pt.x, n - theta);
    const double curv = coeff * std::pow(pt.x, theta - 2) * std::pow(1.0 - pt.x, n - theta - 1) *
                        (static_cast<double>(theta - 1) - static_cast<double>(n - 1) * pt.x);
    const double j11 = 1.0 - tail;                 // dF1/dp
    const double j12 = (1.0 - pt.p) * slope - 1.0; // dF1/dx
    const double j21 = -slope;                     // dF2/dp
    const double j22 = (1.0 - pt.p) * curv;        // dF2/dx
    const double det = j11 * j22 - j12 * j21;
    if (std::abs(det) < 1e-300) {
      iters_used += it;
      return false;
    }
    const double dp = (-pt.f1 * j22 + pt.f2 * j12) / det;
    const double dx = (-pt.f2 * j11 + pt.f1 * j21) / det;

    double lambda = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h) {
      const double pn = pt.p + lambda * dp;
      const double xn = pt.x + lambda * dx;
      if (pn > 1e-12 && pn < 1.0 - 1e-12 && xn > 1e-12 && xn < 1.0 - 1e-12) {
        NewtonPoint cand = eval_tangency(n, theta, pn, xn);
        if (cand.norm() < pt.norm()) {
          pt = cand;
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      iters_used += it + 1;
      return pt.norm() <= 1e-12;
    }
  }
  iters_used += max_iters;
  return pt.norm() <= 1e-12;
}

}  // namespace

const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::kRootScan:
      return "root-scan";
    case Criterion::kIteration:
      return "iteration";
    case Criterion::kBothAgree:
      return "both-agree";
  }
  return "unknown";
}

RootScanResult count_roots(const PhiParams& params, int grid_size) {
  if (grid_size < 100) throw std::invalid_argument("count_roots: grid_size must be >= 100");

  auto f = [&](double x) { return detail::activation(params.n, params.theta, params.p, x) - x; };

  RootScanResult out;
  const double g = static_cast<double>(grid_size);
  double prev_x = 0.0;
  double prev_v = f(0.0);  // = p, but evaluate uniformly
  for (int i = 1; i <= grid_size; ++i) {
    const double x = static_cast<double>(i) / g;
    const double v = f(x);
    // Interior grid point landing exactly on a root.
    if (i < grid_size && v == 0.0) {
      out.roots.push_back(x);
      out.brackets.emplace_back(x, x);
      prev_x = x;
      prev_v = v;
      continue;
    }
    if (prev_v != 0.0 && prev_v * v < 0.0) {
      double lo = prev_x, hi = x;
      double flo = prev_v;
      while (hi - lo > kRefineWidth) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if (flo * fm < 0.0) {
          hi = mid;
        } else {
          lo = mid;
          flo = fm;
        }
      }
      out.roots.push_back(0.5 * (lo + hi));
      out.brackets.emplace_back(prev_x, x);
    }
    prev_x = x;
    prev_v = v;
  }
  out.count = static_cast<int>(out.roots.size());
  return out;
}

TangencyResult find_pc_regular(int n, int theta) {
  if (n < 2 || n > kMaxOffspring) {
    throw std::invalid_argument("find_pc_regular: n outside [2, " + std::to_string(kMaxOffspring) + "]");
  }
  if (theta < 2 || theta > n - 1) {
    throw std::invalid_argument("find_pc_regular: theta outside [2, n-1]");
  }

  const double x_star = static_cast<double>(theta - 1) / static_cast<double>(n - 1);
  TangencyResult result;

  NewtonPoint pt = eval_tangency(n, theta, 0.1, 0.5 * x_star);
  bool ok = newton_tangency(n, theta, pt, 100, result.newton_iters);

  if (!ok) {
    // Nested bisection: outer on p via the sign of the interior minimum of
    // Phi_p, inner scan + golden refinement; then a Newton polish from the
    // bisected point.
    result.used_fallback = true;
    double lo = 0.0, hi = 1.0;
    ScanMin at_mid;
    while (hi - lo > 1e-13) {
      const double mid = 0.5 * (lo + hi);
      at_mid = min_big_phi(n, theta, mid, kScanGrid);
      if (at_mid.value > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    const double p_seed = 0.5 * (lo + hi);
    at_mid = min_big_phi(n, theta, p_seed, kScanGrid);
    pt = eval_tangency(n, theta, p_seed, at_mid.x);
    ok = newton_tangency(n, theta, pt, 20, result.newton_iters);
  }

  result.p_c = Probability(pt.p);
  result.x_tangent = Probability(pt.x);
  result.residual_phi = std::abs(pt.f1);
  result.residual_slope = std::abs(pt.f2);

  if (!ok || result.residual_phi > 1e-12 || result.residual_slope > 1e-12) {
    std::ostringstream msg;
    msg << "find_pc_regular(" << n << ", " << theta << "): tangency residuals not met (|Phi|="
        << result.residual_phi << ", |Phi'|=" << result.residual_slope << ")";
    throw std::runtime_error(msg.str());
  }
  if (!(pt.x > 0.0 && pt.x < 1.0 && pt.x < x_star)) {
    throw std::runtime_error("find_pc_regular: tangent point outside (0, x*)");
  }
  // Double-root certificate: Phi keeps its sign in a punctured neighborhood.
  for (double h : {1e-5, 1e-3}) {
    for (double s : {-1.0, 1.0}) {
      const double x = pt.x + s * h;
      if (x > 0.0 && x < 1.0 && detail::activation(n, theta, pt.p, x) - x < -1e-12) {
        throw std::runtime_error("find_pc_regular: sign change next to the tangent point");
      }
    }
  }
  return result;
}

SupercriticalCertificate is_supercritical(const TreeSpec& spec, int theta, Probability p,
                                          const ThresholdOptions& options) {
  require_strict(spec, theta, "is_supercritical");
  if (options.scan_grid < 100) throw std::invalid_argument("is_supercritical: scan_grid too small");

  SupercriticalCertificate cert;

  const bool want_scan = options.criterion != Criterion::kIteration;
  const bool want_iter = options.criterion != Criterion::kRootScan;

  bool scan_verdict = false;
  if (want_scan) {
    auto displacement = [&](double x) { return composite_raw(spec, theta, p, x) - x; };
    const ScanMin m = scan_minimum(displacement, options.scan_grid, kBoundaryDelta);
    cert.min_x = m.x;
    cert.margin = m.value;
    scan_verdict = m.value > 0.0;
  }

  bool iter_verdict = false;
  if (want_iter) {
    cert.iteration = iterate_to_limit(spec, theta, p, options.iteration);
    cert.iteration_checked = true;
    iter_verdict = cert.iteration.all_one();
  }

  switch (options.criterion) {
    case Criterion::kRootScan:
      cert.supercritical = scan_verdict;
      break;
    case Criterion::kIteration:
      cert.supercritical = iter_verdict;
      break;
    case Criterion::kBothAgree:
      if (scan_verdict != iter_verdict) {
        std::ostringstream msg;
        msg << "criterion disagreement at p=" << static_cast<double>(p) << ": scan says "
            << (scan_verdict ? "supercritical" : "subcritical") << " (margin " << cert.margin
            << " at x=" << cert.min_x << "), iteration "
            << (cert.iteration.converged ? "converged" : "hit the cap") << " at max residual "
            << cert.iteration.residual;
        throw CriterionDisagreement(msg.str());
      }
      cert.supercritical = scan_verdict;
      break;
  }
  return cert;
}

std::pair<Probability, Probability> sandwich_bounds(const TreeSpec& spec, int theta) {
  require_strict(spec, theta, "sandwich_bounds");
  const double lower = find_pc_regular(spec.max_offspring(), theta).p_c;
  const double upper = find_pc_regular(spec.min_offspring(), theta).p_c;
  return {Probability(std::max(lower - kBracketWiden, kBoundaryDelta)),
          Probability(std::min(upper + kBracketWiden, 1.0 - kBoundaryDelta))};
}

ThresholdResult find_pf(const TreeSpec& spec, int theta, const ThresholdOptions& options) {
  require_strict(spec, theta, "find_pf");
  if (options.eps_p <= 0.0) throw std::invalid_argument("find_pf: eps_p must be positive");

  auto [lo_p, hi_p] = sandwich_bounds(spec, theta);
  double lo = lo_p, hi = hi_p;
  if (!(lo < hi)) throw std::logic_error("find_pf: sandwich bracket inverted");

  ThresholdResult result;
  result.criterion = options.criterion;

  auto classify = [&](double p) {
    ++result.evaluations;
    return is_supercritical(spec, theta, Probability(p), options).supercritical;
  };

  if (classify(lo)) throw std::logic_error("find_pf: lower sandwich bound is supercritical");
  if (!classify(hi)) throw std::logic_error("find_pf: upper sandwich bound is subcritical");

  while (hi - lo > options.eps_p) {
    const double mid = 0.5 * (lo + hi);
    if (classify(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  result.p_low = Probability(lo);
  result.p_high = Probability(hi);
  result.p_est = Probability(0.5 * (lo + hi));
  return result;
}

UnorientedLimits unoriented_limits(int a, int b, int theta, Probability p,
                                   const ThresholdOptions& options) {
  const TreeSpec spec({a, b});
  require_strict(spec, theta, "unoriented_limits");

  UnorientedLimits out;
  out.oriented = iterate_to_limit(spec, theta, p, options.iteration);
  const double x_or = out.oriented.limits[0];
  const double y_or = out.oriented.limits[1];
  out.x_inf = Probability(p + (1.0 - p) * detail::binom_tail_raw(a + 1, theta, y_or));
  out.y_inf = Probability(p + (1.0 - p) * detail::binom_tail_raw(b + 1, theta, x_or));
  return out;
}

}  // namespace perctree
