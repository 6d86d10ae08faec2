#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace fdnet {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 2000;
};

// Thrown when adaptive subdivision exhausts its budget. Carries the best
// estimate and its error bound so callers can decide whether to salvage it.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double estimate, double error_bound)
      : std::runtime_error(msg), estimate(estimate), error_bound(error_bound) {}
  double estimate;
  double error_bound;
};

struct Integral {
  double value;
  double error;  // bound on |value - exact|
};

// sin(pi x)/(pi x); value 1 at x = 0, nulls at nonzero integers, so
// sinc(2f/B) vanishes at the channel edges f = +-B/2.
double sinc(double x);

// 2F1(1, 1-2/eta; 2-2/eta; -x) for x >= 0, the interference moment kernel.
// Strictly decreasing from 1 toward 0. Throws std::domain_error for eta <= 2
// (the underlying integral diverges) or x < 0.
double hyp2f1_interference(double eta, double x);

// gamma(a, x) = integral_0^x t^{a-1} e^{-t} dt. Throws std::domain_error for
// a <= 0 or x < 0.
double lower_incomplete_gamma(double a, double x);

// Adaptive Gauss-Kronrod (7/15) integration of f over (a, b). Either endpoint
// may be infinite; semi-infinite ranges are mapped onto [0,1) through
// g = u/(1-u) before subdivision, so f is never evaluated at the endpoints.
// Throws ConvergenceError when the tolerance cannot be met within
// spec.max_subdivisions.
Integral integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureSpec& spec = {});

}  // namespace fdnet
