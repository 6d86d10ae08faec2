#pragma once

#include <memory>

#include "fdnet/geometry.hpp"
#include "fdnet/numerics.hpp"
#include "fdnet/spectrum.hpp"

namespace fdnet {

class U1Table;

// Immutable evaluation point: one (config, topology, alpha) combination.
// factors and plan must come from the same alpha.
struct EvalContext {
  NetworkConfig cfg;
  Topology topology;
  SpectralFactors factors;
  BandPlan plan;
  QuadratureSpec quad;
  // Test hook: treats the intra-cell term as absent so callers can bound the
  // effect of intra-cell interference. Never set in production paths.
  bool force_u1_unity = false;

  std::shared_ptr<const U1Table> u1_table;  // ThreeNode DL fast path
  double r_max = 0.0;                       // cached max_range(cfg)
  double e_pu = 0.0;                        // cached expected_ul_power_frac(cfg)
};

// Validates cfg and precomputes derived quantities. For ThreeNode the
// intra-cell interference table is built (or fetched from a process-wide
// cache keyed on the deployment parameters) before the context is returned,
// so evaluation afterwards is pure and safe under concurrency. Pass
// tabulate_u1 = false to force direct quadrature of the intra-cell term
// (slow; used to validate the table).
EvalContext make_context(const NetworkConfig& cfg, Topology topology,
                         const BandPlan& plan, const SpectralFactors& factors,
                         const QuadratureSpec& quad = {},
                         bool tabulate_u1 = true);

// Laplace transform of the unit-mean SI fading distribution at arg >= 0:
// Degenerate -> e^{-arg}, Exponential -> 1/(1+arg).
double si_laplace(SiDistribution kind, double arg);

// Intra-cell UL-to-DL fading average for the ThreeNode downlink; 1 for
// TwoNode. r_o in (0, R_M], s >= 0.
double u1(const EvalContext& ctx, double r_o, double s);

// DL-UE self-interference term for TwoNode under channel inversion; 1 for
// ThreeNode.
double u2(const EvalContext& ctx, double r_o, double s);

// BS self-interference term; 1 when beta_ul = 0.
double u3(const EvalContext& ctx, double s);

// Laplace transforms of the aggregate interference seen by the DL UE at
// serving distance r_o, and by the BS on the UL. Values in (0, 1].
double lt_dl(const EvalContext& ctx, double r_o, double s);
double lt_ul(const EvalContext& ctx, double s);

struct Estimate {
  double value;
  double error;  // propagated quadrature error bound
};

Estimate outage_dl(const EvalContext& ctx, double target_rate);
Estimate outage_ul(const EvalContext& ctx, double target_rate);
Estimate rate_dl(const EvalContext& ctx);
Estimate rate_ul(const EvalContext& ctx);

struct AnalyticMetrics {
  Estimate rate_dl;
  Estimate rate_ul;
  Estimate outage_dl;
  Estimate outage_ul;
};

AnalyticMetrics analytic_metrics(const EvalContext& ctx, double target_rate_dl,
                                 double target_rate_ul);

}  // namespace fdnet
