#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdnet/analytic.hpp"
#include "fdnet/geometry.hpp"
#include "fdnet/spectrum.hpp"

namespace fdnet {

enum class Link { Downlink, Uplink };

// Monte Carlo controls. A realization draws fresh geometry; each of its
// drops reuses that geometry with new scheduling and fading. Realizations
// are the clustering unit for standard errors.
struct SimSpec {
  double region_half_width = 10000.0;
  double observation_half_width = 1000.0;
  int realizations = 200;
  int drops_per_realization = 8;
  std::uint64_t seed = 1;
  int min_ues_per_cell = 2;
  double ue_density_factor = 20.0;

  void validate() const;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// One cell's schedule on the test channel pair for one drop. The two-node
// topology serves a single user in both directions (dl_ue == ul_ue); the
// three-node topology picks two distinct users. ul_power is zero when the
// user is beyond max_range and stays silent.
struct CellSchedule {
  int dl_ue = -1;
  int ul_ue = -1;
  double ul_power = 0.0;
  double ul_dist = 0.0;
};

// Fading seen by one victim receiver: from_bs[j] is the power gain from
// base station j, from_ul[c] from cell c's scheduled uplink user, h_si the
// self-interference draw (fixed at 1 under the degenerate distribution).
struct VictimFading {
  std::vector<double> from_bs;
  std::vector<double> from_ul;
  double h_si = 1.0;
};

struct Realization {
  std::vector<Vec2> bs;
  std::vector<Vec2> ue;
  std::vector<int> ue_serving;
  std::vector<std::vector<int>> cell_ues;
  // Pre-top-up user count per cell: the downlink victim weight that makes
  // the scheduled user statistically a uniformly chosen network user.
  std::vector<int> initial_ue_count;
  std::size_t n_initial_ue = 0;
  std::vector<CellSchedule> cells;
  std::vector<int> test_cells;
  // Indexed like test_cells: dl_fading[t] at the scheduled downlink user
  // of test cell t, ul_fading[t] at its base station.
  std::vector<VictimFading> dl_fading;
  std::vector<VictimFading> ul_fading;
};

// Counter-based generator: output k is a hash of (base + k), with the base
// keyed by (seed, purpose, realization, drop). Streams never overlap and
// any realization can be produced without generating its predecessors.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t purpose,
            std::uint64_t realization, std::uint64_t drop);

  std::uint64_t next_u64();
  double u01();          // [0, 1)
  double exponential();  // mean 1
  int poisson(double mean);

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Deterministic in (seed, stream_index): geometry is keyed by the
// realization index stream_index / drops_per_realization, scheduling and
// fading by the drop index stream_index % drops_per_realization.
Realization generate_realization(const NetworkConfig& cfg, Topology topology,
                                 const SimSpec& sim,
                                 std::uint64_t stream_index);

struct SinrTerms {
  double desired = 0.0;
  double noise = 0.0;
  double bs_interference = 0.0;
  double ue_interference = 0.0;
  double self_interference = 0.0;

  double sinr() const {
    return desired /
           (noise + bs_interference + ue_interference + self_interference);
  }
};

// victim_slot indexes real.test_cells. The topology argument controls how
// the own cell is treated, so one realization can be scored both ways.
SinrTerms sinr_terms(const Realization& real, const NetworkConfig& cfg,
                     Topology topology, const SpectralFactors& factors,
                     Link link, int victim_slot);
double compute_sinr(const Realization& real, const NetworkConfig& cfg,
                    Topology topology, const SpectralFactors& factors,
                    Link link, int victim_slot);

class EmptyEstimateError : public std::runtime_error {
 public:
  explicit EmptyEstimateError(const std::string& what)
      : std::runtime_error(what) {}
};

// Weighted grand means over all victims, standard errors cluster-robust
// over realizations. dl_samples and ul_samples are the accepted victim
// weights behind the respective estimates.
struct McEstimate {
  double rate_dl = 0.0;
  double rate_dl_se = 0.0;
  double rate_ul = 0.0;
  double rate_ul_se = 0.0;
  double outage_dl = 0.0;
  double outage_dl_se = 0.0;
  double outage_ul = 0.0;
  double outage_ul_se = 0.0;
  double dl_samples = 0.0;
  double ul_samples = 0.0;
};

// Downlink victims are each test cell's scheduled downlink user, weighted
// by the cell's pre-top-up user count and kept only when the serving
// distance is within max_range; uplink victims are the non-silent test
// cells, weight one each. Throws EmptyEstimateError when a link ends up
// with zero accepted weight.
McEstimate estimate_metrics(const NetworkConfig& cfg, Topology topology,
                            const BandPlan& plan,
                            const SpectralFactors& factors, const SimSpec& sim,
                            double target_rate_dl = 1.0e6,
                            double target_rate_ul = 1.0e6);

// Empirical Laplace transform of the victim-side aggregate interference,
// one estimate per entry of s_values. Downlink probes place a phantom
// victim at distance r_o from each test station, keeping draws for which
// that station remains the nearest; uplink probes sit at the test stations
// themselves and ignore r_o.
std::vector<Estimate> empirical_lt(const NetworkConfig& cfg, Topology topology,
                                   const SpectralFactors& factors,
                                   const SimSpec& sim, Link link,
                                   const std::vector<double>& s_values,
                                   double r_o);

// Weighted Kolmogorov-Smirnov distance between the scheduled downlink
// victims' serving distances and the analytic truncated-Rayleigh law, with
// the same weighting and conditioning as estimate_metrics.
double serving_distance_ks(const NetworkConfig& cfg, Topology topology,
                           const SimSpec& sim);

void dump_realization_csv(const Realization& real, std::ostream& os);

}  // namespace fdnet
