#include "fdnet/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fdnet {

double sinc(double x) {
  // Below ~1e-8 the quadratic correction term of the series is under 1 ulp.
  double px = M_PI * x;
  if (std::abs(x) < 1e-8) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double fl = f(c - h * kXgk[i]);
    double fr = f(c + h * kXgk[i]);
    kronrod += kWgk[i] * (fl + fr);
    if (i % 2 == 1) gauss += kWg[i / 2] * (fl + fr);
  }
  // |K15 - G7| estimates the Gauss error; for the Kronrod value it is a
  // conservative bound on smooth integrands.
  return {a, b, kronrod * h, std::abs(kronrod - gauss) * h};
}

Integral integrate_finite(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec) {
  std::priority_queue<Panel> panels;
  Panel first = evaluate_panel(f, a, b);
  double total = first.value;
  double total_err = first.error;
  panels.push(first);
  int splits = 0;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (splits >= spec.max_subdivisions) {
      throw ConvergenceError("quadrature did not converge within " +
                                 std::to_string(spec.max_subdivisions) +
                                 " subdivisions",
                             total, total_err);
    }
    Panel worst = panels.top();
    panels.pop();
    double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid);
    Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++splits;
  }
  return {total, total_err};
}

}  // namespace

Integral integrate(const std::function<double(double)>& f, double a, double b,
                   const QuadratureSpec& spec) {
  bool a_inf = std::isinf(a);
  bool b_inf = std::isinf(b);
  if (a_inf && b_inf) {
    Integral neg = integrate([&f](double x) { return f(-x); }, 0.0, kInfinity,
                             spec);
    Integral pos = integrate(f, 0.0, kInfinity, spec);
    return {neg.value + pos.value, neg.error + pos.error};
  }
  if (b_inf) {
    // x = a + u/(1-u); Kronrod abscissae are interior, so u < 1 always.
    auto g = [&f, a](double u) {
      double w = 1.0 - u;
      return f(a + u / w) / (w * w);
    };
    return integrate_finite(g, 0.0, 1.0, spec);
  }
  if (a_inf) {
    auto g = [&f, b](double u) {
      double w = 1.0 - u;
      return f(b - u / w) / (w * w);
    };
    return integrate_finite(g, 0.0, 1.0, spec);
  }
  return integrate_finite(f, a, b, spec);
}

double hyp2f1_interference(double eta, double x) {
  if (eta <= 2.0) {
    throw std::domain_error("hyp2f1_interference requires eta > 2");
  }
  if (x < 0.0) {
    throw std::domain_error("hyp2f1_interference requires x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (eta == 4.0) {
    // b = 1/2 collapses to arctan: 2F1(1, 1/2; 3/2; -x) = atan(sqrt x)/sqrt x.
    double sx = std::sqrt(x);
    return std::atan(sx) / sx;
  }
  double b = 1.0 - 2.0 / eta;
  if (x <= 0.5) {
    // 2F1(1, b; b+1; -x) = sum_k b/(b+k) (-x)^k; alternating, ratio <= 1/2.
    double sum = 0.0;
    double pow_term = 1.0;
    for (int k = 0; k < 200; ++k) {
      double term = b / (b + k) * pow_term;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
      pow_term *= -x;
    }
    return sum;
  }
  // Euler form after t = u^{1/b}: integral_0^1 du / (1 + x u^{eta/(eta-2)}).
  double p = eta / (eta - 2.0);
  QuadratureSpec tight{1e-13, 1e-300, 2000};
  return integrate([x, p](double u) { return 1.0 / (1.0 + x * std::pow(u, p)); },
                   0.0, 1.0, tight)
      .value;
}

double lower_incomplete_gamma(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    throw std::domain_error("lower_incomplete_gamma requires a > 0, x >= 0");
  }
  if (x == 0.0) return 0.0;
  double gamma_a = std::tgamma(a);
  if (x < a + 1.0) {
    // Series for P(a,x): x^a e^{-x} sum_k x^k / (a (a+1) ... (a+k)).
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
      term *= x / (a + k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x + a * std::log(x));
  }
  // Continued fraction for Q(a,x) (modified Lentz).
  double tiny = 1e-300;
  double f = tiny, c = f, d = 0.0;
  for (int i = 1; i < 500; ++i) {
    double an, bn;
    if (i == 1) {
      an = 1.0;
      bn = x + 1.0 - a;
    } else {
      an = -(i - 1.0) * (i - 1.0 - a);
      bn = x + 2.0 * i - 1.0 - a;
    }
    d = bn + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = bn + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  double upper = std::exp(-x + a * std::log(x)) * f;
  return gamma_a - upper;
}

}  // namespace fdnet
