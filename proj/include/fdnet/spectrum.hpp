#pragma once

#include <functional>

#include "fdnet/numerics.hpp"

namespace fdnet {

enum class PulseKind { Rectangular, Triangular };

// Paired-channel layout after widening both directions by the overlap
// fraction alpha. delta_f is the spacing between the DL and UL center
// frequencies; it reaches 0 at alpha = 1 with equal half-duplex bandwidths.
struct BandPlan {
  double bw_dl_hd;        // Hz
  double bw_ul_hd;        // Hz
  double guard_fraction;  // epsilon
  double alpha;           // [0, 1]
  double bw_dl;           // Hz, widened
  double bw_ul;           // Hz, widened
  double delta_f;         // Hz
};

BandPlan make_band_plan(double bw_dl_hd, double bw_ul_hd, double guard_fraction,
                        double alpha);

// Power-domain interference weights; all four are squared magnitudes in [0,1].
struct SpectralFactors {
  double i_dl;  // |I_d|^2, in-band self weight of the DL pulse
  double i_ul;  // |I_u|^2
  double c_dl;  // |C_d|^2, UL-aggressor weight at a DL victim
  double c_ul;  // |C_u|^2, DL-aggressor weight at a UL victim
};

// Unit-energy magnitude spectrum: sinc(2f/bw) for Rectangular, sinc^2(2f/bw)
// for Triangular, normalized so the squared spectrum integrates to 1.
std::function<double(double)> pulse_spectrum(PulseKind kind, double bw);

// In-band amplitude fraction of the unit-energy pulse over [-bw/2, bw/2].
// A pure shape property: invariant under bandwidth rescaling. In (0.5, 1).
double intra_mode_factor(PulseKind kind, double bw);

// Signed overlap of the victim's matched filter with an aggressor spectrum
// shifted by delta_f, integrated over the victim's band. Callers square it
// for power weights.
double cross_mode_factor(PulseKind victim_kind, double victim_bw,
                         PulseKind aggressor_kind, double aggressor_bw,
                         double delta_f);

// Squared factors for one band plan: c_dl sees the UL aggressor at +delta_f,
// c_ul sees the DL aggressor at -delta_f.
SpectralFactors spectral_factors(const BandPlan& plan, PulseKind dl_kind,
                                 PulseKind ul_kind);

}  // namespace fdnet
