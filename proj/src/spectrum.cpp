#include "fdnet/spectrum.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fdnet {

BandPlan make_band_plan(double bw_dl_hd, double bw_ul_hd, double guard_fraction,
                        double alpha) {
  if (bw_dl_hd <= 0.0 || bw_ul_hd <= 0.0) {
    throw std::domain_error("make_band_plan: bandwidths must be positive");
  }
  if (guard_fraction < 0.0) {
    throw std::domain_error("make_band_plan: guard fraction must be >= 0");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::domain_error("make_band_plan: alpha must lie in [0, 1]");
  }
  double b = std::min(bw_dl_hd, bw_ul_hd);
  double widen = alpha * (guard_fraction + 1.0) * b;
  BandPlan plan;
  plan.bw_dl_hd = bw_dl_hd;
  plan.bw_ul_hd = bw_ul_hd;
  plan.guard_fraction = guard_fraction;
  plan.alpha = alpha;
  plan.bw_dl = bw_dl_hd + widen;
  plan.bw_ul = bw_ul_hd + widen;
  plan.delta_f = 0.5 * (bw_dl_hd + bw_ul_hd + 2.0 * guard_fraction * b -
                        2.0 * alpha * b * (guard_fraction + 1.0));
  return plan;
}

namespace {

int sinc_power(PulseKind kind) {
  return kind == PulseKind::Rectangular ? 1 : 2;
}

double sinc_pow(double x, int p) {
  double s = sinc(x);
  return p == 1 ? s : s * s;
}

// Energy of the raw shape per unit of the reduced variable x = 2f/bw:
// integral of sinc^{2p}(x) over all x, by quadrature over +-50 null-to-null
// widths plus the analytic tail of the envelope (1/2 resp. 3/8 mean of the
// oscillation over x^{-2p}). Residual below 1e-6 relative.
double shape_energy(PulseKind kind) {
  int p = sinc_power(kind);
  QuadratureSpec spec{1e-10, 1e-14, 4000};
  double body = 2.0 * integrate([p](double x) {
                        double s = sinc_pow(x, p);
                        return s * s;
                      },
                      0.0, 100.0, spec)
                          .value;
  double tail = (p == 1) ? 2.0 * (1.0 / (2.0 * M_PI * M_PI * 100.0))
                         : 2.0 * (3.0 / (8.0 * 3.0 * std::pow(M_PI, 4) *
                                         100.0 * 100.0 * 100.0));
  return body + tail;
}

double cached_shape_energy(PulseKind kind) {
  static const double rect = shape_energy(PulseKind::Rectangular);
  static const double tri = shape_energy(PulseKind::Triangular);
  return kind == PulseKind::Rectangular ? rect : tri;
}

double in_band_fraction(PulseKind kind) {
  int p = sinc_power(kind);
  QuadratureSpec spec{1e-12, 1e-15, 4000};
  double in_band = 2.0 * integrate([p](double x) {
                           double s = sinc_pow(x, p);
                           return s * s;
                         },
                         0.0, 1.0, spec)
                             .value;
  return in_band / cached_shape_energy(kind);
}

// Reduced-coordinate cross overlap; see cross_mode_factor for the scaling.
double cross_reduced(PulseKind victim_kind, PulseKind aggressor_kind,
                     double bw_ratio, double shift) {
  int pv = sinc_power(victim_kind);
  int pa = sinc_power(aggressor_kind);
  QuadratureSpec spec{1e-10, 1e-14, 4000};
  double overlap = integrate(
                       [=](double x) {
                         return sinc_pow(x, pv) *
                                sinc_pow((x - shift) * bw_ratio, pa);
                       },
                       -1.0, 1.0, spec)
                       .value;
  double qv = cached_shape_energy(victim_kind);
  double qa = cached_shape_energy(aggressor_kind);
  return overlap * std::sqrt(bw_ratio / (qv * qa));
}

struct CrossKey {
  int victim, aggressor;
  double ratio, shift;
  bool operator<(const CrossKey& o) const {
    return std::tie(victim, aggressor, ratio, shift) <
           std::tie(o.victim, o.aggressor, o.ratio, o.shift);
  }
};

std::mutex cross_cache_mutex;
std::map<CrossKey, double> cross_cache;

}  // namespace

std::function<double(double)> pulse_spectrum(PulseKind kind, double bw) {
  if (bw <= 0.0) throw std::domain_error("pulse_spectrum: bw must be positive");
  int p = sinc_power(kind);
  // Raw energy integral sinc^{2p}(2f/bw) df = (bw/2) * shape energy.
  double norm = std::sqrt(0.5 * bw * cached_shape_energy(kind));
  return [p, bw, norm](double f) { return sinc_pow(2.0 * f / bw, p) / norm; };
}

double intra_mode_factor(PulseKind kind, double bw) {
  if (bw <= 0.0) {
    throw std::domain_error("intra_mode_factor: bw must be positive");
  }
  static const double rect = in_band_fraction(PulseKind::Rectangular);
  static const double tri = in_band_fraction(PulseKind::Triangular);
  return kind == PulseKind::Rectangular ? rect : tri;
}

double cross_mode_factor(PulseKind victim_kind, double victim_bw,
                         PulseKind aggressor_kind, double aggressor_bw,
                         double delta_f) {
  if (victim_bw <= 0.0 || aggressor_bw <= 0.0) {
    throw std::domain_error("cross_mode_factor: bandwidths must be positive");
  }
  CrossKey key{static_cast<int>(victim_kind), static_cast<int>(aggressor_kind),
               victim_bw / aggressor_bw, 2.0 * delta_f / victim_bw};
  {
    std::lock_guard<std::mutex> lock(cross_cache_mutex);
    auto it = cross_cache.find(key);
    if (it != cross_cache.end()) return it->second;
  }
  double value =
      cross_reduced(victim_kind, aggressor_kind, key.ratio, key.shift);
  std::lock_guard<std::mutex> lock(cross_cache_mutex);
  cross_cache.emplace(key, value);
  return value;
}

SpectralFactors spectral_factors(const BandPlan& plan, PulseKind dl_kind,
                                 PulseKind ul_kind) {
  double i_dl = intra_mode_factor(dl_kind, plan.bw_dl);
  double i_ul = intra_mode_factor(ul_kind, plan.bw_ul);
  double c_dl = cross_mode_factor(dl_kind, plan.bw_dl, ul_kind, plan.bw_ul,
                                  plan.delta_f);
  double c_ul = cross_mode_factor(ul_kind, plan.bw_ul, dl_kind, plan.bw_dl,
                                  -plan.delta_f);
  return {i_dl * i_dl, i_ul * i_ul, c_dl * c_dl, c_ul * c_ul};
}

}  // namespace fdnet
