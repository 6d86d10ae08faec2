#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fdnet/geometry.hpp"
#include "fdnet/simulate.hpp"
#include "fdnet/spectrum.hpp"

namespace fdnet {

enum class SweepAxis { Alpha, BetaDl, TargetRate };
enum class EngineChoice { Analytic, MonteCarlo, Both };

// Reference deployment: 3 BS/km^2, eta 4, 5 W downlink, 2 W uplink cap,
// -75 dBm inversion target, -90 dBm noise, -75 dB residual SI at the user,
// BS-side SI cancellation off, degenerate SI fading.
NetworkConfig default_network();

// 21 evenly spaced overlap fractions covering [0, 1].
std::vector<double> default_alpha_grid();

// Channel-pair layout: rectangular downlink pulse, triangular uplink pulse,
// 1 MHz half-duplex channels, guard fraction 0.03134.
struct DuplexSpec {
  PulseKind dl_pulse = PulseKind::Rectangular;
  PulseKind ul_pulse = PulseKind::Triangular;
  double guard_fraction = 0.03134;
  double bw_dl_hd = 1.0e6;
  double bw_ul_hd = 1.0e6;
  std::vector<Topology> topologies{Topology::TwoNode, Topology::ThreeNode};
};

// One sweep: the axis values in grid replace the corresponding fixed field
// (alpha, network.beta_dl, or both target rates); everything else is held
// at the values below. BetaDl grid entries are in dB.
struct SweepConfig {
  NetworkConfig network = default_network();
  DuplexSpec duplex;
  SweepAxis axis = SweepAxis::Alpha;
  std::vector<double> grid = default_alpha_grid();
  double alpha = 1.0;
  double target_rate_dl = 1.0e6;
  double target_rate_ul = 1.0e6;
  EngineChoice engines = EngineChoice::Both;
  SimSpec sim;
  std::string output = "sweep.csv";

  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// JSON document with unit-suffixed keys (rho_dbm, bw_dl_hd_hz, ...); every
// field is optional and defaults to the reference setup above. Unknown keys
// and type mismatches raise ConfigError naming the field; syntax errors
// name the line. origin labels the source in diagnostics.
SweepConfig parse_config(const std::string& text, const std::string& origin);
SweepConfig load_config(const std::string& path);

const char* topology_name(Topology t);
const char* axis_name(SweepAxis a);
const char* engine_name(EngineChoice e);
const char* pulse_name(PulseKind k);

}  // namespace fdnet
