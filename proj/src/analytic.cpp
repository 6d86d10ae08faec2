#include "fdnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>
#include <vector>

namespace fdnet {

// Intra-cell term tabulated on a log-log (r_o, x) grid, x = s |C_d|^2 rho.
// The grid is alpha-independent, so one table serves a whole alpha sweep for
// a given deployment. Values are stored as log(U1) and interpolated with a
// clamped Catmull-Rom bicubic; grid resolution is validated against direct
// quadrature in the test suite (rate impact < 0.2%).
class U1Table {
 public:
  U1Table(const NetworkConfig& cfg, int nr, int nx);

  double evaluate(double r_o, double x) const;

 private:
  std::vector<double> log_r_, log_x_;
  std::vector<double> log_u_;  // row-major [r][x]
  double dlr_, dlx_;
  double deficit_exponent_;  // 1 - U1 ~ x^{2/eta} as x -> 0
};

namespace {

constexpr int kU1GridR = 64;
constexpr int kU1GridX = 192;
constexpr double kU1XLow = 1e-10;
constexpr double kU1XHigh = 1e14;

double catmull_rom(double pm1, double p0, double p1, double p2, double t) {
  return p0 + 0.5 * t * (p1 - pm1 +
                         t * (2.0 * pm1 - 5.0 * p0 + 4.0 * p1 - p2 +
                              t * (3.0 * (p0 - p1) + p2 - pm1)));
}

}  // namespace

U1Table::U1Table(const NetworkConfig& cfg, int nr, int nx) {
  deficit_exponent_ = 2.0 / cfg.eta;
  double r_max = max_range(cfg);
  ServingDistancePdf pdf = serving_distance_pdf(cfg);
  log_r_.resize(nr);
  log_x_.resize(nx);
  double lr0 = std::log(r_max * 1e-4);
  double lr1 = std::log(r_max);
  double lx0 = std::log(kU1XLow);
  double lx1 = std::log(kU1XHigh);
  dlr_ = (lr1 - lr0) / (nr - 1);
  dlx_ = (lx1 - lx0) / (nx - 1);
  for (int i = 0; i < nr; ++i) log_r_[i] = lr0 + i * dlr_;
  for (int j = 0; j < nx; ++j) log_x_[j] = lx0 + j * dlx_;
  log_u_.assign(static_cast<size_t>(nr) * nx, 0.0);

  // Dense tensor quadrature: trapezoid over the interferer's serving distance
  // and the angle. The x-sweep reuses each distance kernel, which is what
  // makes the table build cheap.
  const int n_rad = 512;
  const int n_ang = 128;
  std::vector<double> rad(n_rad), wr(n_rad), ang_cos(n_ang), wa(n_ang);
  double h_rad = (r_max - 1e-3) / (n_rad - 1);
  for (int k = 0; k < n_rad; ++k) {
    rad[k] = 1e-3 + k * h_rad;
    wr[k] = pdf(rad[k]) * h_rad * ((k == 0 || k == n_rad - 1) ? 0.5 : 1.0);
  }
  double h_ang = M_PI / (n_ang - 1);
  for (int k = 0; k < n_ang; ++k) {
    ang_cos[k] = std::cos(k * h_ang);
    wa[k] = h_ang / M_PI * ((k == 0 || k == n_ang - 1) ? 0.5 : 1.0);
  }

  double half_eta = 0.5 * cfg.eta;
  std::vector<double> xs(nx);
  for (int j = 0; j < nx; ++j) xs[j] = std::exp(log_x_[j]);
  auto fill_row = [&](int i) {
    double ro = std::exp(log_r_[i]);
    std::vector<double> acc(nx, 0.0);
    std::vector<double> d_pow(n_ang);  // d^{-eta} in units of the serving r
    for (int k = 0; k < n_rad; ++k) {
      double q = ro / rad[k];
      double q2 = 1.0 + q * q;
      for (int m = 0; m < n_ang; ++m) {
        d_pow[m] = std::pow(q2 - 2.0 * q * ang_cos[m], -half_eta);
      }
      for (int j = 0; j < nx; ++j) {
        double x = xs[j];
        double angular = 0.0;
        for (int m = 0; m < n_ang; ++m) {
          angular += wa[m] / (1.0 + x * d_pow[m]);
        }
        acc[j] += wr[k] * angular;
      }
    }
    for (int j = 0; j < nx; ++j) {
      log_u_[static_cast<size_t>(i) * nx + j] =
          std::log(std::max(acc[j], 1e-300));
    }
  };

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned n_workers = std::min<unsigned>(hw, nr);
  std::vector<std::thread> workers;
  std::vector<int> next_row(1, 0);
  std::mutex row_mutex;
  for (unsigned w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        int i;
        {
          std::lock_guard<std::mutex> lock(row_mutex);
          if (next_row[0] >= nr) return;
          i = next_row[0]++;
        }
        fill_row(i);
      }
    });
  }
  for (auto& t : workers) t.join();
}

double U1Table::evaluate(double r_o, double x) const {
  double x_lo = std::exp(log_x_.front());
  if (x < x_lo) {
    // The dip region of the integrand shrinks as x^{2/eta}, so the deficit
    // from 1 scales the same way; freezing it at the clamp value would leave
    // a spurious outage floor at vanishing thresholds.
    double edge = evaluate(r_o, x_lo);
    return 1.0 - (1.0 - edge) * std::pow(x / x_lo, deficit_exponent_);
  }
  int nr = static_cast<int>(log_r_.size());
  int nx = static_cast<int>(log_x_.size());
  double lr = std::clamp(std::log(r_o), log_r_.front(), log_r_.back());
  double lx = std::clamp(std::log(x), log_x_.front(), log_x_.back());
  double fi = (lr - log_r_.front()) / dlr_;
  double fj = (lx - log_x_.front()) / dlx_;
  int i = std::clamp(static_cast<int>(fi), 0, nr - 2);
  int j = std::clamp(static_cast<int>(fj), 0, nx - 2);
  double ti = fi - i;
  double tj = fj - j;
  auto at = [&](int a, int b) {
    a = std::clamp(a, 0, nr - 1);
    b = std::clamp(b, 0, nx - 1);
    return log_u_[static_cast<size_t>(a) * nx + b];
  };
  double rows[4];
  for (int di = -1; di <= 2; ++di) {
    rows[di + 1] = catmull_rom(at(i + di, j - 1), at(i + di, j),
                               at(i + di, j + 1), at(i + di, j + 2), tj);
  }
  double lu = catmull_rom(rows[0], rows[1], rows[2], rows[3], ti);
  return std::min(1.0, std::exp(lu));
}

namespace {

struct U1CacheKey {
  double lambda, eta, rho, p_ul_max;
  bool operator<(const U1CacheKey& o) const {
    return std::tie(lambda, eta, rho, p_ul_max) <
           std::tie(o.lambda, o.eta, o.rho, o.p_ul_max);
  }
};

std::mutex u1_cache_mutex;
std::map<U1CacheKey, std::shared_ptr<const U1Table>> u1_cache;

std::shared_ptr<const U1Table> u1_table_for(const NetworkConfig& cfg) {
  U1CacheKey key{cfg.lambda_bs, cfg.eta, cfg.rho, cfg.p_ul_max};
  // Held across the build: concurrent sweep workers share one deployment, and
  // a duplicated build costs far more than the contention.
  std::lock_guard<std::mutex> lock(u1_cache_mutex);
  auto it = u1_cache.find(key);
  if (it != u1_cache.end()) return it->second;
  auto table = std::make_shared<const U1Table>(cfg, kU1GridR, kU1GridX);
  return u1_cache.emplace(key, std::move(table)).first->second;
}

double hyp_f(const EvalContext& ctx, double x) {
  return hyp2f1_interference(ctx.cfg.eta, x);
}

QuadratureSpec inner_spec(const QuadratureSpec& outer) {
  return {outer.rel_tol * 0.1, outer.abs_tol * 0.1, outer.max_subdivisions};
}

}  // namespace

EvalContext make_context(const NetworkConfig& cfg, Topology topology,
                         const BandPlan& plan, const SpectralFactors& factors,
                         const QuadratureSpec& quad, bool tabulate_u1) {
  cfg.validate();
  EvalContext ctx;
  ctx.cfg = cfg;
  ctx.topology = topology;
  ctx.factors = factors;
  ctx.plan = plan;
  ctx.quad = quad;
  ctx.r_max = max_range(cfg);
  ctx.e_pu = expected_ul_power_frac(cfg);
  if (topology == Topology::ThreeNode && tabulate_u1) {
    ctx.u1_table = u1_table_for(cfg);
  }
  return ctx;
}

double si_laplace(SiDistribution kind, double arg) {
  if (arg < 0.0) throw std::domain_error("si_laplace: arg must be >= 0");
  return kind == SiDistribution::Degenerate ? std::exp(-arg)
                                            : 1.0 / (1.0 + arg);
}

double u1(const EvalContext& ctx, double r_o, double s) {
  if (ctx.topology == Topology::TwoNode) return 1.0;
  double x = s * ctx.factors.c_dl * ctx.cfg.rho;
  if (x <= 0.0) return 1.0;
  if (ctx.u1_table) return ctx.u1_table->evaluate(r_o, x);
  ServingDistancePdf pdf = serving_distance_pdf(ctx.cfg);
  double half_eta = 0.5 * ctx.cfg.eta;
  QuadratureSpec spec = inner_spec(ctx.quad);
  auto outer = [&](double r) {
    double q = r_o / r;
    double q2 = 1.0 + q * q;
    auto angular = [&](double theta) {
      double d2 = q2 - 2.0 * q * std::cos(theta);
      return 1.0 / (M_PI + M_PI * x / std::pow(d2, half_eta));
    };
    return pdf(r) * integrate(angular, 0.0, M_PI, spec).value;
  };
  return integrate(outer, 0.0, ctx.r_max, ctx.quad).value;
}

double u2(const EvalContext& ctx, double r_o, double s) {
  if (ctx.topology == Topology::ThreeNode) return 1.0;
  double arg = ctx.cfg.beta_dl * s * ctx.cfg.rho *
               std::pow(r_o, ctx.cfg.eta) * ctx.factors.c_dl;
  return si_laplace(ctx.cfg.si_distribution, arg);
}

double u3(const EvalContext& ctx, double s) {
  double arg = ctx.cfg.beta_ul * s * ctx.cfg.p_dl * ctx.factors.c_ul;
  return si_laplace(ctx.cfg.si_distribution, arg);
}

double lt_dl(const EvalContext& ctx, double r_o, double s) {
  if (s == 0.0) return 1.0;
  const NetworkConfig& cfg = ctx.cfg;
  double two_pi_l = 2.0 * M_PI * cfg.lambda_bs / (cfg.eta - 2.0);
  // Interfering BSs, excluded inside the serving distance.
  double bs_arg = std::pow(r_o, -cfg.eta) * cfg.p_dl * ctx.factors.i_dl * s;
  double a_bs = two_pi_l * std::pow(r_o, 2.0 - cfg.eta) * ctx.factors.i_dl *
                s * cfg.p_dl * hyp_f(ctx, bs_arg);
  // Power-controlled UL interferers leaking across.
  double a_ue = 0.0;
  if (ctx.factors.c_dl > 0.0) {
    a_ue = two_pi_l * std::pow(cfg.rho, 1.0 - 2.0 / cfg.eta) * ctx.e_pu *
           ctx.factors.c_dl * s * hyp_f(ctx, cfg.rho * ctx.factors.c_dl * s);
  }
  double intra = ctx.force_u1_unity ? 1.0 : u1(ctx, r_o, s);
  return std::exp(-a_bs - a_ue) * intra * u2(ctx, r_o, s);
}

double lt_ul(const EvalContext& ctx, double s) {
  if (s == 0.0) return 1.0;
  const NetworkConfig& cfg = ctx.cfg;
  double b_ue = 2.0 * M_PI * cfg.lambda_bs / (cfg.eta - 2.0) *
                std::pow(cfg.rho, 1.0 - 2.0 / cfg.eta) * ctx.e_pu *
                ctx.factors.i_ul * s *
                hyp_f(ctx, cfg.rho * ctx.factors.i_ul * s);
  double b_bs = 0.0;
  if (ctx.factors.c_ul > 0.0) {
    b_bs = 2.0 * M_PI * M_PI * cfg.lambda_bs / cfg.eta *
           std::pow(s * ctx.factors.c_ul * cfg.p_dl, 2.0 / cfg.eta) /
           std::sin(2.0 * M_PI / cfg.eta);
  }
  return std::exp(-b_ue - b_bs) * u3(ctx, s);
}

Estimate outage_dl(const EvalContext& ctx, double target_rate) {
  if (target_rate < 0.0) {
    throw std::domain_error("outage_dl: target_rate must be >= 0");
  }
  const NetworkConfig& cfg = ctx.cfg;
  double thr = std::exp2(target_rate / ctx.plan.bw_dl) - 1.0;
  ServingDistancePdf pdf = serving_distance_pdf(cfg);
  auto integrand = [&](double r_o) {
    double ro_eta = std::pow(r_o, cfg.eta);
    double s = thr * ro_eta / (cfg.p_dl * ctx.factors.i_dl);
    return pdf(r_o) * std::exp(-cfg.noise * thr * ro_eta / cfg.p_dl) *
           lt_dl(ctx, r_o, s);
  };
  Integral cover = integrate(integrand, 0.0, ctx.r_max, ctx.quad);
  return {1.0 - cover.value, cover.error};
}

Estimate outage_ul(const EvalContext& ctx, double target_rate) {
  if (target_rate < 0.0) {
    throw std::domain_error("outage_ul: target_rate must be >= 0");
  }
  const NetworkConfig& cfg = ctx.cfg;
  double thr = std::exp2(target_rate / ctx.plan.bw_ul) - 1.0;
  double cover = std::exp(-cfg.noise * thr / cfg.rho) *
                 lt_ul(ctx, thr / (cfg.rho * ctx.factors.i_ul));
  return {1.0 - cover, 0.0};
}

Estimate rate_dl(const EvalContext& ctx) {
  const NetworkConfig& cfg = ctx.cfg;
  ServingDistancePdf pdf = serving_distance_pdf(cfg);
  QuadratureSpec inner = inner_spec(ctx.quad);
  auto conditional_cover = [&](double g) {
    auto integrand = [&](double r_o) {
      double ro_eta = std::pow(r_o, cfg.eta);
      double s = g * ro_eta / (cfg.p_dl * ctx.factors.i_dl);
      return pdf(r_o) * std::exp(-cfg.noise * g * ro_eta / cfg.p_dl) *
             lt_dl(ctx, r_o, s);
    };
    return integrate(integrand, 0.0, ctx.r_max, inner).value;
  };
  auto outer = [&](double g) {
    return conditional_cover(g) / ((g + 1.0) * M_LN2);
  };
  Integral result = integrate(outer, 0.0, kInfinity, ctx.quad);
  return {ctx.plan.bw_dl * result.value, ctx.plan.bw_dl * result.error};
}

Estimate rate_ul(const EvalContext& ctx) {
  const NetworkConfig& cfg = ctx.cfg;
  auto outer = [&](double g) {
    return std::exp(-cfg.noise * g / cfg.rho) *
           lt_ul(ctx, g / (cfg.rho * ctx.factors.i_ul)) /
           ((g + 1.0) * M_LN2);
  };
  Integral result = integrate(outer, 0.0, kInfinity, ctx.quad);
  return {ctx.plan.bw_ul * result.value, ctx.plan.bw_ul * result.error};
}

AnalyticMetrics analytic_metrics(const EvalContext& ctx, double target_rate_dl,
                                 double target_rate_ul) {
  return {rate_dl(ctx), rate_ul(ctx), outage_dl(ctx, target_rate_dl),
          outage_ul(ctx, target_rate_ul)};
}

}  // namespace fdnet
