#pragma once

#include <iosfwd>
#include <vector>

#include "fdnet/analytic.hpp"
#include "fdnet/config.hpp"
#include "fdnet/simulate.hpp"

namespace fdnet {

// Exit codes shared with the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;
inline constexpr int kExitValidation = 3;

// Runs every (grid value, topology, engine) combination and writes the CSV
// to cfg.output plus a matplotlib script beside it. Rows appear in grid
// order regardless of worker completion order, and the file is bit-stable
// for a fixed config and seed. Returns kExitNumeric when any point failed;
// the partial CSV is then flagged with a trailing "# incomplete" line.
int run_sweep(const SweepConfig& cfg, std::ostream& log);

// Runs both engines over the grid and reports per-point relative rate
// errors (5% gate), interference-transform spot checks at the grid
// extremes (3 standard errors), and the serving-distance KS statistic
// (0.02 gate). corrupt_c_dl_scale multiplies the Monte Carlo engine's
// |C_d|^2 and exists so tests can prove the report catches a broken
// factor. Returns kExitOk, kExitValidation, or kExitNumeric.
int cross_validate(const SweepConfig& cfg, std::ostream& log,
                   double corrupt_c_dl_scale = 1.0);

// count log-spaced transform arguments covering roughly [0.1, 0.9] of the
// analytic transform's range, located by bisection. r_o is the downlink
// victim distance; ignored for the uplink.
std::vector<double> lt_probe_s_values(const EvalContext& ctx, Link link,
                                      double r_o, int count);

}  // namespace fdnet
