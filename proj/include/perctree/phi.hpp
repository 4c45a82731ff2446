#pragma once

#include "perctree/types.hpp"

namespace perctree {

/// Parameters of the one-step activation map phi(x) = p + (1-p) P(Bin(n,x) >= theta):
/// the probability that a node with n in-neighbors, each independently active
/// with probability x, is active given initial activation probability p.
/// theta = n is accepted for evaluation (phi = p + (1-p) x^n); the tangency
/// analysis additionally requires theta <= n-1.
struct PhiParams {
  PhiParams(int n_in, int theta_in, Probability p_in);

  int n;
  int theta;
  Probability p;
};

/// P(Bin(n, x) >= theta). Returns 1 for theta <= 0 and 0 for theta > n.
/// Accepts n up to kMaxOffspring + 1 (the unoriented closure evaluates
/// degree-(m+1) tails).
Probability binom_tail(int n, int theta, Probability x);

Probability phi(const PhiParams& params, Probability x);

/// d(phi)/dx = (1-p) n C(n-1, theta-1) x^(theta-1) (1-x)^(n-theta).
double phi_prime(const PhiParams& params, Probability x);

/// Argmax of phi' over (0,1): x* = (theta-1)/(n-1). Requires 2 <= theta <= n-1;
/// phi' is strictly increasing on [0,x*) and strictly decreasing on (x*,1].
Probability phi_prime_stationary_x(int n, int theta);

/// Phi_p(x) = phi(x) - x. Zero at x = 1 for every parameter choice.
double big_phi(const PhiParams& params, Probability x);

namespace detail {

/// Tail probability on raw doubles, total in theta (theta <= 0 -> 1,
/// theta > n -> 0). Used by the hot recurrence/scan paths.
double binom_tail_raw(int n, int theta, double x);

/// Activation map on raw doubles; tolerates theta > n (the class can then
/// only activate initially, so the map is identically p).
double activation(int n, int theta, double p, double x);

/// phi' on raw doubles for 2 <= theta <= n.
double activation_slope(int n, int theta, double p, double x);

double binom_coefficient(int n, int k);

}  // namespace detail

}  // namespace perctree
