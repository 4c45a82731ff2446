#include "perctree/phi.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace perctree {

namespace detail {

double binom_tail_raw(int n, int theta, double x) {
  if (theta <= 0) return 1.0;
  if (theta > n) return 0.0;
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  if (x <= 0.5) {
    // Upper tail by the pmf recurrence pmf(k+1) = pmf(k) (n-k)/(k+1) x/(1-x)
    // from pmf(0) = (1-x)^n. No binomial coefficients, no cancellation.
    const double ratio = x / (1.0 - x);
    double pmf = std::pow(1.0 - x, n);
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
      if (k + 1 >= theta) sum += pmf;
    }
    return sum < 1.0 ? sum : 1.0;
  }

  // x > 1/2: same recurrence on the reflected variable. P(Bin(n,x) >= theta)
  // equals P(Bin(n,1-x) <= n-theta), whose pmf starts at x^n and so stays
  // clear of underflow even as x approaches 1 along a fixed-point iteration.
  const double q = 1.0 - x;
  const double ratio = q / x;
  double pmf = std::pow(x, n);
  double sum = pmf;
  for (int k = 0; k < n - theta; ++k) {
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    sum += pmf;
  }
  return sum < 1.0 ? sum : 1.0;
}

double activation(int n, int theta, double p, double x) {
  return p + (1.0 - p) * binom_tail_raw(n, theta, x);
}

double binom_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  double c = 1.0;
  for (int i = 0; i < k; ++i) {
    c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  }
  return c;
}

double activation_slope(int n, int theta, double p, double x) {
  const double coeff = static_cast<double>(n) * binom_coefficient(n - 1, theta - 1);
  return (1.0 - p) * coeff * std::pow(x, theta - 1) * std::pow(1.0 - x, n - theta);
}

}  // namespace detail

PhiParams::PhiParams(int n_in, int theta_in, Probability p_in) : n(n_in), theta(theta_in), p(p_in) {
  if (n < 1 || n > kMaxOffspring) {
    throw std::invalid_argument("phi: n outside [1, " + std::to_string(kMaxOffspring) + "]");
  }
  if (theta < 2 || theta > n) {
    throw std::invalid_argument("phi: theta outside [2, n]");
  }
}

Probability binom_tail(int n, int theta, Probability x) {
  if (n < 1 || n > kMaxOffspring + 1) {
    throw std::invalid_argument("binom_tail: n outside [1, " + std::to_string(kMaxOffspring + 1) + "]");
  }
  return Probability(detail::binom_tail_raw(n, theta, x));
}

Probability phi(const PhiParams& params, Probability x) {
  return Probability(detail::activation(params.n, params.theta, params.p, x));
}

double phi_prime(const PhiParams& params, Probability x) {
  return detail::activation_slope(params.n, params.theta, params.p, x);
}

Probability phi_prime_stationary_x(int n, int theta) {
  if (theta < 2 || theta > n - 1) {
    throw std::invalid_argument("phi_prime_stationary_x: theta outside [2, n-1]");
  }
  return Probability(static_cast<double>(theta - 1) / static_cast<double>(n - 1));
}

double big_phi(const PhiParams& params, Probability x) {
  return detail::activation(params.n, params.theta, params.p, x) - x;
}

}  // namespace perctree
