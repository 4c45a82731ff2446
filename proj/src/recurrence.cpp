#include "perctree/recurrence.hpp"

#include <cmath>
#include <stdexcept>

#include "perctree/phi.hpp"

namespace perctree {

namespace {

void check_theta(int theta) {
  if (theta < 2) throw std::invalid_argument("recurrence: theta must be >= 2");
}

}  // namespace

OrientedState initial_state(const TreeSpec& spec, Probability p) {
  OrientedState s;
  s.t = 0;
  s.probs.assign(static_cast<std::size_t>(spec.period()), p);
  return s;
}

OrientedState step(const TreeSpec& spec, int theta, Probability p, const OrientedState& state) {
  check_theta(theta);
  const std::size_t l = static_cast<std::size_t>(spec.period());
  if (state.probs.size() != l) {
    throw std::invalid_argument("step: class count mismatch between state and spec");
  }
  OrientedState out;
  out.t = state.t + 1;
  out.probs.reserve(l);
  for (std::size_t k = 0; k < l; ++k) {
    const double y = state.probs[(k + 1) % l];
    out.probs.emplace_back(detail::activation(spec.offspring()[k], theta, p, y));
  }
  return out;
}

LimitResult iterate_to_limit(const TreeSpec& spec, int theta, Probability p,
                             const IterationControl& control) {
  check_theta(theta);
  const std::size_t l = static_cast<std::size_t>(spec.period());
  const auto& m = spec.offspring();

  std::vector<double> cur(l, p);
  std::vector<double> nxt(l);

  LimitResult result;
  while (result.iterations < control.cap) {
    double residual = 0.0;
    for (std::size_t k = 0; k < l; ++k) {
      nxt[k] = detail::activation(m[k], theta, p, cur[(k + 1) % l]);
      residual = std::max(residual, std::abs(nxt[k] - cur[k]));
    }
    cur.swap(nxt);
    ++result.iterations;
    result.residual = residual;
    if (residual < control.tol) {
      result.converged = true;
      break;
    }
  }

  result.limits.reserve(l);
  for (double v : cur) result.limits.emplace_back(v);
  return result;
}

Probability composite_map(const TreeSpec& spec, int theta, Probability p, int class_index,
                          Probability x) {
  check_theta(theta);
  const int l = spec.period();
  if (class_index < 0 || class_index >= l) {
    throw std::invalid_argument("composite_map: class index out of range");
  }
  double v = x;
  for (int j = l - 1; j >= 0; --j) {
    v = detail::activation(spec.offspring_at(class_index + j), theta, p, v);
  }
  return Probability(v);
}

}  // namespace perctree
