#include "fdnet/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <ostream>
#include <utility>

namespace fdnet {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t kPurposeGeometry = 0x67656f6dull;
constexpr std::uint64_t kPurposeSchedule = 0x73636564ull;
constexpr std::uint64_t kPurposeFading = 0x66616465ull;
constexpr std::uint64_t kPurposeProbe = 0x70726f62ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

double dist2(Vec2 a, Vec2 b) {
  double dx = a.x - b.x;
  double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// d^{-eta} from the squared distance.
double pathloss(double d2, double eta) {
  if (eta == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * eta);
}

// Uniform-grid nearest-neighbour index over the base stations.
class NearestBsIndex {
 public:
  NearestBsIndex(const std::vector<Vec2>& bs, double half_width)
      : bs_(bs), half_(half_width) {
    n_ = static_cast<int>(std::sqrt(static_cast<double>(bs.size())));
    n_ = std::clamp(n_, 1, 512);
    cell_ = 2.0 * half_ / n_;
    bins_.resize(static_cast<std::size_t>(n_) * n_);
    for (int j = 0; j < static_cast<int>(bs.size()); ++j) {
      bins_[bin_index(bs_[j])].push_back(j);
    }
  }

  int nearest(Vec2 p) const {
    int ix = axis_bin(p.x);
    int iy = axis_bin(p.y);
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring < n_; ++ring) {
      if (best >= 0) {
        // Any point in a bin at Chebyshev ring k is at least (k-1) bin
        // widths away, so the current best cannot be beaten beyond that.
        double safe = (ring - 1) * cell_;
        if (safe > 0.0 && safe * safe > best_d2) break;
      }
      int x0 = std::max(0, ix - ring), x1 = std::min(n_ - 1, ix + ring);
      int y0 = std::max(0, iy - ring), y1 = std::min(n_ - 1, iy + ring);
      for (int gx = x0; gx <= x1; ++gx) {
        for (int gy = y0; gy <= y1; ++gy) {
          if (std::max(std::abs(gx - ix), std::abs(gy - iy)) != ring) continue;
          for (int j : bins_[static_cast<std::size_t>(gx) * n_ + gy]) {
            double d2 = dist2(bs_[j], p);
            if (d2 < best_d2) {
              best_d2 = d2;
              best = j;
            }
          }
        }
      }
    }
    return best;
  }

 private:
  int axis_bin(double v) const {
    int b = static_cast<int>((v + half_) / cell_);
    return std::clamp(b, 0, n_ - 1);
  }
  std::size_t bin_index(Vec2 p) const {
    return static_cast<std::size_t>(axis_bin(p.x)) * n_ + axis_bin(p.y);
  }

  const std::vector<Vec2>& bs_;
  double half_;
  int n_ = 1;
  double cell_ = 0.0;
  std::vector<std::vector<int>> bins_;
};

int knuth_poisson(RngStream& rng, double mean) {
  if (mean <= 0.0) return 0;
  double limit = std::exp(-mean);
  int k = 0;
  double p = 1.0;
  do {
    ++k;
    p *= rng.u01();
  } while (p > limit);
  return k - 1;
}

Vec2 uniform_point(RngStream& rng, double half) {
  Vec2 p;
  p.x = (2.0 * rng.u01() - 1.0) * half;
  p.y = (2.0 * rng.u01() - 1.0) * half;
  return p;
}

Realization build_geometry(const NetworkConfig& cfg, const SimSpec& sim,
                           std::uint64_t realization) {
  double margin = sim.region_half_width - sim.observation_half_width;
  if (margin < 1.0 / std::sqrt(M_PI * cfg.lambda_bs)) {
    throw std::invalid_argument(
        "observation window must keep at least one mean cell radius of "
        "guard region around it");
  }

  RngStream rng(sim.seed, kPurposeGeometry, realization, 0);
  double half = sim.region_half_width;
  double area = 4.0 * half * half;

  Realization real;
  int n_bs = 0;
  for (int attempt = 0;; ++attempt) {
    n_bs = rng.poisson(cfg.lambda_bs * area);
    if (n_bs > 0) break;
    if (attempt + 1 >= 1000) {
      throw std::runtime_error(
          "region produced no base stations in 1000 consecutive draws");
    }
    std::cerr << "fdnet: empty base-station draw in realization "
              << realization << ", resampling\n";
  }
  real.bs.resize(n_bs);
  for (auto& p : real.bs) p = uniform_point(rng, half);

  NearestBsIndex index(real.bs, half);

  int n_ue = rng.poisson(sim.ue_density_factor * cfg.lambda_bs * area);
  real.ue.resize(n_ue);
  real.ue_serving.resize(n_ue);
  real.cell_ues.assign(n_bs, {});
  real.initial_ue_count.assign(n_bs, 0);
  for (int u = 0; u < n_ue; ++u) {
    real.ue[u] = uniform_point(rng, half);
    int c = index.nearest(real.ue[u]);
    real.ue_serving[u] = c;
    real.cell_ues[c].push_back(u);
    real.initial_ue_count[c] += 1;
  }
  real.n_initial_ue = static_cast<std::size_t>(n_ue);

  // Top up deficient cells with uniform region draws kept only while the
  // receiving cell is still short, which leaves them uniform in that cell.
  long deficit = 0;
  for (int c = 0; c < n_bs; ++c) {
    deficit += std::max(
        0, sim.min_ues_per_cell - static_cast<int>(real.cell_ues[c].size()));
  }
  long budget = 2000000;
  while (deficit > 0) {
    if (--budget < 0) {
      throw std::runtime_error("per-cell top-up did not converge");
    }
    Vec2 p = uniform_point(rng, half);
    int c = index.nearest(p);
    if (static_cast<int>(real.cell_ues[c].size()) >= sim.min_ues_per_cell) {
      continue;
    }
    int u = static_cast<int>(real.ue.size());
    real.ue.push_back(p);
    real.ue_serving.push_back(c);
    real.cell_ues[c].push_back(u);
    deficit -= 1;
  }

  real.cells.assign(n_bs, {});
  for (int c = 0; c < n_bs; ++c) {
    if (std::abs(real.bs[c].x) <= sim.observation_half_width &&
        std::abs(real.bs[c].y) <= sim.observation_half_width) {
      real.test_cells.push_back(c);
    }
  }
  real.dl_fading.resize(real.test_cells.size());
  real.ul_fading.resize(real.test_cells.size());
  return real;
}

void refresh_drop(Realization& real, const NetworkConfig& cfg,
                  Topology topology, const SimSpec& sim,
                  std::uint64_t realization, std::uint64_t drop) {
  int n_bs = static_cast<int>(real.bs.size());
  int n_ue = static_cast<int>(real.ue.size());

  RngStream sched(sim.seed, kPurposeSchedule, realization, drop);
  std::vector<double> key(n_ue);
  for (auto& k : key) k = sched.u01();

  // argmin and argmax of i.i.d. keys give a uniformly chosen ordered pair
  // of distinct users; the two-node topology keeps only the argmin.
  double r_cap = max_range(cfg);
  for (int c = 0; c < n_bs; ++c) {
    const auto& members = real.cell_ues[c];
    int lo = members.front();
    int hi = lo;
    for (int u : members) {
      if (key[u] < key[lo]) lo = u;
      if (key[u] > key[hi]) hi = u;
    }
    CellSchedule& cell = real.cells[c];
    cell.dl_ue = lo;
    cell.ul_ue = topology == Topology::ThreeNode ? hi : lo;
    double d = std::sqrt(dist2(real.ue[cell.ul_ue], real.bs[c]));
    cell.ul_dist = d;
    cell.ul_power =
        d <= r_cap ? std::min(cfg.rho * std::pow(d, cfg.eta), cfg.p_ul_max)
                   : 0.0;
  }

  RngStream fad(sim.seed, kPurposeFading, realization, drop);
  bool exp_si = cfg.si_distribution == SiDistribution::Exponential;
  for (std::size_t t = 0; t < real.test_cells.size(); ++t) {
    for (VictimFading* vf : {&real.dl_fading[t], &real.ul_fading[t]}) {
      vf->from_bs.resize(n_bs);
      for (auto& g : vf->from_bs) g = fad.exponential();
      vf->from_ul.resize(n_bs);
      for (auto& g : vf->from_ul) g = fad.exponential();
      double h = fad.exponential();
      vf->h_si = exp_si ? h : 1.0;
    }
  }
}

struct Pooled {
  double mean = 0.0;
  double se = 0.0;
};

// Ratio-estimator mean with a cluster-robust standard error over
// realizations; drops within a realization share geometry and stay pooled.
Pooled pool(const std::vector<double>& sums, const std::vector<double>& wts,
            const char* what) {
  double sw = 0.0;
  double ss = 0.0;
  for (std::size_t k = 0; k < sums.size(); ++k) {
    sw += wts[k];
    ss += sums[k];
  }
  if (!(sw > 0.0)) {
    throw EmptyEstimateError(std::string("no eligible samples for ") + what);
  }
  Pooled out;
  out.mean = ss / sw;
  std::size_t n = sums.size();
  if (n < 2) {
    out.se = std::numeric_limits<double>::infinity();
    return out;
  }
  double resid2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double r = sums[k] - out.mean * wts[k];
    resid2 += r * r;
  }
  out.se = std::sqrt(resid2 * static_cast<double>(n) /
                     (static_cast<double>(n) - 1.0)) /
           sw;
  return out;
}

}  // namespace

void SimSpec::validate() const {
  if (!(region_half_width > 0.0) || !(observation_half_width > 0.0) ||
      !(observation_half_width < region_half_width)) {
    throw std::invalid_argument(
        "observation window must lie strictly inside the region");
  }
  if (realizations < 1) {
    throw std::invalid_argument("realizations must be positive");
  }
  if (drops_per_realization < 1) {
    throw std::invalid_argument("drops_per_realization must be positive");
  }
  if (min_ues_per_cell < 2) {
    throw std::invalid_argument("min_ues_per_cell must be at least 2");
  }
  if (!(ue_density_factor > 0.0)) {
    throw std::invalid_argument("ue_density_factor must be positive");
  }
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t purpose,
                     std::uint64_t realization, std::uint64_t drop) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ purpose);
  h = mix64(h ^ realization);
  h = mix64(h ^ drop);
  base_ = h;
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(base_ + counter_ * kGolden);
}

double RngStream::u01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log1p(-u01()); }

int RngStream::poisson(double mean) {
  if (!(mean >= 0.0)) {
    throw std::invalid_argument("poisson mean must be non-negative");
  }
  // Knuth's product method underflows past ~700, so sample in chunks.
  int total = 0;
  double remaining = mean;
  while (remaining > 256.0) {
    total += knuth_poisson(*this, 256.0);
    remaining -= 256.0;
  }
  total += knuth_poisson(*this, remaining);
  return total;
}

Realization generate_realization(const NetworkConfig& cfg, Topology topology,
                                 const SimSpec& sim,
                                 std::uint64_t stream_index) {
  cfg.validate();
  sim.validate();
  std::uint64_t drops = static_cast<std::uint64_t>(sim.drops_per_realization);
  std::uint64_t realization = stream_index / drops;
  std::uint64_t drop = stream_index % drops;
  Realization real = build_geometry(cfg, sim, realization);
  refresh_drop(real, cfg, topology, sim, realization, drop);
  return real;
}

SinrTerms sinr_terms(const Realization& real, const NetworkConfig& cfg,
                     Topology topology, const SpectralFactors& factors,
                     Link link, int victim_slot) {
  int c = real.test_cells.at(static_cast<std::size_t>(victim_slot));
  const CellSchedule& sch = real.cells.at(c);
  int n_bs = static_cast<int>(real.bs.size());
  SinrTerms t;

  if (link == Link::Downlink) {
    const VictimFading& f =
        real.dl_fading.at(static_cast<std::size_t>(victim_slot));
    Vec2 v = real.ue.at(static_cast<std::size_t>(sch.dl_ue));
    t.desired = cfg.p_dl * f.from_bs[c] *
                pathloss(dist2(v, real.bs[c]), cfg.eta) * factors.i_dl;
    t.noise = cfg.noise * factors.i_dl;
    for (int j = 0; j < n_bs; ++j) {
      if (j == c) continue;
      t.bs_interference += cfg.p_dl * f.from_bs[j] *
                           pathloss(dist2(v, real.bs[j]), cfg.eta) *
                           factors.i_dl;
    }
    for (int jc = 0; jc < n_bs; ++jc) {
      // The own cell's uplink user interferes in the three-node topology;
      // in the two-node topology it is the victim itself and shows up as
      // residual self-interference instead.
      if (jc == c && topology == Topology::TwoNode) continue;
      const CellSchedule& o = real.cells[jc];
      if (o.ul_power <= 0.0) continue;
      t.ue_interference += o.ul_power * f.from_ul[jc] *
                           pathloss(dist2(v, real.ue[o.ul_ue]), cfg.eta) *
                           factors.c_dl;
    }
    if (topology == Topology::TwoNode) {
      t.self_interference = cfg.beta_dl * f.h_si * sch.ul_power * factors.c_dl;
    }
    return t;
  }

  const VictimFading& f =
      real.ul_fading.at(static_cast<std::size_t>(victim_slot));
  Vec2 v = real.bs[c];
  if (sch.ul_power > 0.0) {
    t.desired = sch.ul_power * f.from_ul[c] *
                pathloss(sch.ul_dist * sch.ul_dist, cfg.eta) * factors.i_ul;
  }
  t.noise = cfg.noise * factors.i_ul;
  for (int j = 0; j < n_bs; ++j) {
    if (j == c) continue;
    t.bs_interference += cfg.p_dl * f.from_bs[j] *
                         pathloss(dist2(v, real.bs[j]), cfg.eta) *
                         factors.c_ul;
  }
  for (int jc = 0; jc < n_bs; ++jc) {
    if (jc == c) continue;
    const CellSchedule& o = real.cells[jc];
    if (o.ul_power <= 0.0) continue;
    t.ue_interference += o.ul_power * f.from_ul[jc] *
                         pathloss(dist2(v, real.ue[o.ul_ue]), cfg.eta) *
                         factors.i_ul;
  }
  t.self_interference = cfg.beta_ul * f.h_si * cfg.p_dl * factors.c_ul;
  return t;
}

double compute_sinr(const Realization& real, const NetworkConfig& cfg,
                    Topology topology, const SpectralFactors& factors,
                    Link link, int victim_slot) {
  return sinr_terms(real, cfg, topology, factors, link, victim_slot).sinr();
}

McEstimate estimate_metrics(const NetworkConfig& cfg, Topology topology,
                            const BandPlan& plan,
                            const SpectralFactors& factors, const SimSpec& sim,
                            double target_rate_dl, double target_rate_ul) {
  cfg.validate();
  sim.validate();
  if (!(target_rate_dl > 0.0) || !(target_rate_ul > 0.0)) {
    throw std::invalid_argument("target rates must be positive");
  }

  int n_real = sim.realizations;
  double r_cap = max_range(cfg);
  double thr_dl = std::exp2(target_rate_dl / plan.bw_dl) - 1.0;
  double thr_ul = std::exp2(target_rate_ul / plan.bw_ul) - 1.0;
  double inv_ln2 = 1.0 / std::log(2.0);

  std::vector<double> rate_dl_sum(n_real, 0.0), out_dl_sum(n_real, 0.0),
      dl_wt(n_real, 0.0);
  std::vector<double> rate_ul_sum(n_real, 0.0), out_ul_sum(n_real, 0.0),
      ul_wt(n_real, 0.0);

  for (int k = 0; k < n_real; ++k) {
    Realization real = build_geometry(cfg, sim, static_cast<std::uint64_t>(k));
    for (int d = 0; d < sim.drops_per_realization; ++d) {
      refresh_drop(real, cfg, topology, sim, static_cast<std::uint64_t>(k),
                   static_cast<std::uint64_t>(d));
      for (std::size_t t = 0; t < real.test_cells.size(); ++t) {
        int c = real.test_cells[t];
        const CellSchedule& sch = real.cells[c];

        double w = static_cast<double>(real.initial_ue_count[c]);
        if (w > 0.0) {
          double r_o = std::sqrt(dist2(real.ue[sch.dl_ue], real.bs[c]));
          if (r_o <= r_cap) {
            double sinr = sinr_terms(real, cfg, topology, factors,
                                     Link::Downlink, static_cast<int>(t))
                              .sinr();
            rate_dl_sum[k] += w * plan.bw_dl * std::log1p(sinr) * inv_ln2;
            out_dl_sum[k] += w * (sinr < thr_dl ? 1.0 : 0.0);
            dl_wt[k] += w;
          }
        }

        if (sch.ul_power > 0.0) {
          double sinr = sinr_terms(real, cfg, topology, factors, Link::Uplink,
                                   static_cast<int>(t))
                            .sinr();
          rate_ul_sum[k] += plan.bw_ul * std::log1p(sinr) * inv_ln2;
          out_ul_sum[k] += sinr < thr_ul ? 1.0 : 0.0;
          ul_wt[k] += 1.0;
        }
      }
    }
  }

  Pooled rdl = pool(rate_dl_sum, dl_wt, "downlink victims");
  Pooled odl = pool(out_dl_sum, dl_wt, "downlink victims");
  Pooled rul = pool(rate_ul_sum, ul_wt, "uplink victims");
  Pooled oul = pool(out_ul_sum, ul_wt, "uplink victims");

  McEstimate est;
  est.rate_dl = rdl.mean;
  est.rate_dl_se = rdl.se;
  est.rate_ul = rul.mean;
  est.rate_ul_se = rul.se;
  est.outage_dl = odl.mean;
  est.outage_dl_se = odl.se;
  est.outage_ul = oul.mean;
  est.outage_ul_se = oul.se;
  double dl_total = 0.0, ul_total = 0.0;
  for (int k = 0; k < n_real; ++k) {
    dl_total += dl_wt[k];
    ul_total += ul_wt[k];
  }
  est.dl_samples = dl_total;
  est.ul_samples = ul_total;
  return est;
}

std::vector<Estimate> empirical_lt(const NetworkConfig& cfg, Topology topology,
                                   const SpectralFactors& factors,
                                   const SimSpec& sim, Link link,
                                   const std::vector<double>& s_values,
                                   double r_o) {
  cfg.validate();
  sim.validate();
  if (link == Link::Downlink && !(r_o > 0.0)) {
    throw std::invalid_argument("downlink probe needs a positive r_o");
  }

  int n_real = sim.realizations;
  std::size_t n_s = s_values.size();
  std::vector<double> sums(static_cast<std::size_t>(n_real) * n_s, 0.0);
  std::vector<double> wts(n_real, 0.0);
  bool exp_si = cfg.si_distribution == SiDistribution::Exponential;
  double si_power_dl = cfg.rho * std::pow(r_o, cfg.eta);

  for (int k = 0; k < n_real; ++k) {
    Realization real = build_geometry(cfg, sim, static_cast<std::uint64_t>(k));
    NearestBsIndex index(real.bs, sim.region_half_width);
    int n_bs = static_cast<int>(real.bs.size());
    for (int d = 0; d < sim.drops_per_realization; ++d) {
      refresh_drop(real, cfg, topology, sim, static_cast<std::uint64_t>(k),
                   static_cast<std::uint64_t>(d));
      RngStream probe(sim.seed, kPurposeProbe, static_cast<std::uint64_t>(k),
                      static_cast<std::uint64_t>(d));
      for (int c : real.test_cells) {
        double agg = 0.0;
        if (link == Link::Downlink) {
          double ang = 2.0 * M_PI * probe.u01();
          Vec2 v{real.bs[c].x + r_o * std::cos(ang),
                 real.bs[c].y + r_o * std::sin(ang)};
          // The conditioning behind the transform is that the victim's
          // serving distance is exactly r_o, so reject placements where
          // another station is closer.
          if (index.nearest(v) != c) continue;
          for (int j = 0; j < n_bs; ++j) {
            if (j == c) continue;
            agg += cfg.p_dl * probe.exponential() *
                   pathloss(dist2(v, real.bs[j]), cfg.eta) * factors.i_dl;
          }
          for (int jc = 0; jc < n_bs; ++jc) {
            if (jc == c && topology == Topology::TwoNode) continue;
            const CellSchedule& o = real.cells[jc];
            if (o.ul_power <= 0.0) continue;
            agg += o.ul_power * probe.exponential() *
                   pathloss(dist2(v, real.ue[o.ul_ue]), cfg.eta) *
                   factors.c_dl;
          }
          double h = probe.exponential();
          if (topology == Topology::TwoNode) {
            agg += cfg.beta_dl * (exp_si ? h : 1.0) * si_power_dl *
                   factors.c_dl;
          }
        } else {
          Vec2 v = real.bs[c];
          for (int jc = 0; jc < n_bs; ++jc) {
            if (jc == c) continue;
            const CellSchedule& o = real.cells[jc];
            if (o.ul_power <= 0.0) continue;
            agg += o.ul_power * probe.exponential() *
                   pathloss(dist2(v, real.ue[o.ul_ue]), cfg.eta) *
                   factors.i_ul;
          }
          for (int j = 0; j < n_bs; ++j) {
            if (j == c) continue;
            agg += cfg.p_dl * probe.exponential() *
                   pathloss(dist2(v, real.bs[j]), cfg.eta) * factors.c_ul;
          }
          double h = probe.exponential();
          agg += cfg.beta_ul * (exp_si ? h : 1.0) * cfg.p_dl * factors.c_ul;
        }
        for (std::size_t i = 0; i < n_s; ++i) {
          sums[static_cast<std::size_t>(k) * n_s + i] +=
              std::exp(-s_values[i] * agg);
        }
        wts[k] += 1.0;
      }
    }
  }

  std::vector<Estimate> out(n_s);
  std::vector<double> one_s(n_real);
  for (std::size_t i = 0; i < n_s; ++i) {
    for (int k = 0; k < n_real; ++k) {
      one_s[k] = sums[static_cast<std::size_t>(k) * n_s + i];
    }
    Pooled p = pool(one_s, wts, "transform probes");
    out[i] = Estimate{p.mean, p.se};
  }
  return out;
}

double serving_distance_ks(const NetworkConfig& cfg, Topology topology,
                           const SimSpec& sim) {
  cfg.validate();
  sim.validate();
  double r_cap = max_range(cfg);
  std::vector<std::pair<double, double>> samples;  // (distance, weight)
  for (int k = 0; k < sim.realizations; ++k) {
    Realization real = build_geometry(cfg, sim, static_cast<std::uint64_t>(k));
    for (int d = 0; d < sim.drops_per_realization; ++d) {
      refresh_drop(real, cfg, topology, sim, static_cast<std::uint64_t>(k),
                   static_cast<std::uint64_t>(d));
      for (int c : real.test_cells) {
        double w = static_cast<double>(real.initial_ue_count[c]);
        if (w <= 0.0) continue;
        double r_o =
            std::sqrt(dist2(real.ue[real.cells[c].dl_ue], real.bs[c]));
        if (r_o <= r_cap) samples.emplace_back(r_o, w);
      }
    }
  }
  if (samples.empty()) {
    throw EmptyEstimateError("no eligible samples for the distance check");
  }
  std::sort(samples.begin(), samples.end());
  double total = 0.0;
  for (const auto& s : samples) total += s.second;
  ServingDistancePdf law = serving_distance_pdf(cfg);
  double ks = 0.0;
  double cum = 0.0;
  for (const auto& s : samples) {
    double model = law.cdf(s.first);
    ks = std::max(ks, std::abs(cum / total - model));
    cum += s.second;
    ks = std::max(ks, std::abs(cum / total - model));
  }
  return ks;
}

void dump_realization_csv(const Realization& real, std::ostream& os) {
  std::vector<char> is_test(real.bs.size(), 0);
  for (int c : real.test_cells) is_test[c] = 1;

  char line[256];
  os << "kind,index,x,y,serving_bs,role,ul_power_watt,topup\n";
  for (std::size_t j = 0; j < real.bs.size(); ++j) {
    std::snprintf(line, sizeof line, "bs,%zu,%.17g,%.17g,,%s,,\n", j,
                  real.bs[j].x, real.bs[j].y, is_test[j] ? "test" : "guard");
    os << line;
  }
  for (std::size_t u = 0; u < real.ue.size(); ++u) {
    int c = real.ue_serving[u];
    const CellSchedule& sch = real.cells[c];
    const char* role = "idle";
    double power = 0.0;
    bool is_dl = static_cast<int>(u) == sch.dl_ue;
    bool is_ul = static_cast<int>(u) == sch.ul_ue;
    if (is_dl && is_ul) {
      role = "both";
    } else if (is_dl) {
      role = "dl";
    } else if (is_ul) {
      role = "ul";
    }
    if (is_ul) power = sch.ul_power;
    std::snprintf(line, sizeof line, "ue,%zu,%.17g,%.17g,%d,%s,%.17g,%d\n", u,
                  real.ue[u].x, real.ue[u].y, c, role, power,
                  u >= real.n_initial_ue ? 1 : 0);
    os << line;
  }
}

}  // namespace fdnet
