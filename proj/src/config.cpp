#include "fdnet/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fdnet {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw ConfigError(origin + ": " + what);
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed,
                const std::string& origin) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) known = known || it.key() == k;
    if (!known) fail(origin, where + "." + it.key() + ": unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_num(const json& obj, const char* key, double def,
               const std::string& where, const std::string& origin) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number()) fail(origin, where + "." + key + ": expected a number");
  return v->get<double>();
}

int get_int(const json& obj, const char* key, int def, const std::string& where,
            const std::string& origin) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer()) {
    fail(origin, where + "." + key + ": expected an integer");
  }
  return v->get<int>();
}

std::uint64_t get_u64(const json& obj, const char* key, std::uint64_t def,
                      const std::string& where, const std::string& origin) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_number_integer() ||
      (v->is_number_integer() && !v->is_number_unsigned() &&
       v->get<std::int64_t>() < 0)) {
    fail(origin, where + "." + key + ": expected a non-negative integer");
  }
  return v->get<std::uint64_t>();
}

std::string get_str(const json& obj, const char* key, const std::string& def,
                    const std::string& where, const std::string& origin) {
  const json* v = find(obj, key);
  if (!v) return def;
  if (!v->is_string()) fail(origin, where + "." + key + ": expected a string");
  return v->get<std::string>();
}

// dB field that also accepts the string "-inf" for a disabled (zero linear)
// value.
double get_db_linear(const json& obj, const char* key, double def_linear,
                     const std::string& where, const std::string& origin) {
  const json* v = find(obj, key);
  if (!v) return def_linear;
  if (v->is_string()) {
    if (v->get<std::string>() == "-inf") return 0.0;
    fail(origin, where + "." + key + ": expected a number or \"-inf\"");
  }
  if (!v->is_number()) {
    fail(origin, where + "." + key + ": expected a number or \"-inf\"");
  }
  return db_to_linear(v->get<double>());
}

PulseKind parse_pulse(const std::string& s, const std::string& where,
                      const std::string& origin) {
  if (s == "rectangular") return PulseKind::Rectangular;
  if (s == "triangular") return PulseKind::Triangular;
  fail(origin, where + ": expected \"rectangular\" or \"triangular\"");
}

void parse_network(const json& obj, NetworkConfig& cfg,
                   const std::string& origin) {
  check_keys(obj, "network",
             {"lambda_bs_per_km2", "eta", "p_dl_watt", "p_ul_max_watt",
              "rho_dbm", "noise_dbm", "beta_dl_db", "beta_ul_db",
              "si_distribution"},
             origin);
  cfg.lambda_bs = get_num(obj, "lambda_bs_per_km2", cfg.lambda_bs * 1.0e6,
                          "network", origin) *
                  1.0e-6;
  cfg.eta = get_num(obj, "eta", cfg.eta, "network", origin);
  cfg.p_dl = get_num(obj, "p_dl_watt", cfg.p_dl, "network", origin);
  cfg.p_ul_max = get_num(obj, "p_ul_max_watt", cfg.p_ul_max, "network", origin);
  cfg.rho = dbm_to_watt(
      get_num(obj, "rho_dbm", watt_to_dbm(cfg.rho), "network", origin));
  cfg.noise = dbm_to_watt(
      get_num(obj, "noise_dbm", watt_to_dbm(cfg.noise), "network", origin));
  cfg.beta_dl = get_db_linear(obj, "beta_dl_db", cfg.beta_dl, "network", origin);
  cfg.beta_ul = get_db_linear(obj, "beta_ul_db", cfg.beta_ul, "network", origin);
  std::string si = get_str(obj, "si_distribution",
                           cfg.si_distribution == SiDistribution::Degenerate
                               ? "degenerate"
                               : "exponential",
                           "network", origin);
  if (si == "degenerate") {
    cfg.si_distribution = SiDistribution::Degenerate;
  } else if (si == "exponential") {
    cfg.si_distribution = SiDistribution::Exponential;
  } else {
    fail(origin,
         "network.si_distribution: expected \"degenerate\" or "
         "\"exponential\"");
  }
}

void parse_duplex(const json& obj, DuplexSpec& duplex,
                  const std::string& origin) {
  check_keys(obj, "duplex",
             {"dl_pulse", "ul_pulse", "guard_fraction", "bw_dl_hd_hz",
              "bw_ul_hd_hz", "topologies"},
             origin);
  duplex.dl_pulse = parse_pulse(
      get_str(obj, "dl_pulse", pulse_name(duplex.dl_pulse), "duplex", origin),
      "duplex.dl_pulse", origin);
  duplex.ul_pulse = parse_pulse(
      get_str(obj, "ul_pulse", pulse_name(duplex.ul_pulse), "duplex", origin),
      "duplex.ul_pulse", origin);
  duplex.guard_fraction =
      get_num(obj, "guard_fraction", duplex.guard_fraction, "duplex", origin);
  duplex.bw_dl_hd = get_num(obj, "bw_dl_hd_hz", duplex.bw_dl_hd, "duplex",
                            origin);
  duplex.bw_ul_hd = get_num(obj, "bw_ul_hd_hz", duplex.bw_ul_hd, "duplex",
                            origin);
  if (const json* v = find(obj, "topologies")) {
    if (!v->is_array() || v->empty()) {
      fail(origin, "duplex.topologies: expected a non-empty array");
    }
    duplex.topologies.clear();
    for (const json& t : *v) {
      if (t.is_string() && t.get<std::string>() == "2nt") {
        duplex.topologies.push_back(Topology::TwoNode);
      } else if (t.is_string() && t.get<std::string>() == "3nt") {
        duplex.topologies.push_back(Topology::ThreeNode);
      } else {
        fail(origin, "duplex.topologies: entries must be \"2nt\" or \"3nt\"");
      }
    }
  }
}

void parse_sweep(const json& obj, SweepConfig& cfg, const std::string& origin) {
  check_keys(obj, "sweep",
             {"axis", "grid", "alpha", "target_rate_dl_bps",
              "target_rate_ul_bps", "engines"},
             origin);
  std::string axis = get_str(obj, "axis", axis_name(cfg.axis), "sweep", origin);
  if (axis == "alpha") {
    cfg.axis = SweepAxis::Alpha;
  } else if (axis == "beta_dl") {
    cfg.axis = SweepAxis::BetaDl;
  } else if (axis == "target_rate") {
    cfg.axis = SweepAxis::TargetRate;
  } else {
    fail(origin,
         "sweep.axis: expected \"alpha\", \"beta_dl\" or \"target_rate\"");
  }
  if (const json* v = find(obj, "grid")) {
    cfg.grid.clear();
    if (v->is_array()) {
      for (const json& g : *v) {
        if (!g.is_number()) {
          fail(origin, "sweep.grid: entries must be numbers");
        }
        cfg.grid.push_back(g.get<double>());
      }
    } else if (v->is_object()) {
      check_keys(*v, "sweep.grid", {"min", "max", "points"}, origin);
      double lo = get_num(*v, "min", 0.0, "sweep.grid", origin);
      double hi = get_num(*v, "max", 1.0, "sweep.grid", origin);
      int n = get_int(*v, "points", 2, "sweep.grid", origin);
      if (n < 1) fail(origin, "sweep.grid.points: must be at least 1");
      for (int i = 0; i < n; ++i) {
        cfg.grid.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
      }
    } else {
      fail(origin, "sweep.grid: expected an array or {min, max, points}");
    }
  } else if (cfg.axis != SweepAxis::Alpha) {
    fail(origin, "sweep.grid: required for non-alpha axes");
  }
  cfg.alpha = get_num(obj, "alpha", cfg.alpha, "sweep", origin);
  cfg.target_rate_dl = get_num(obj, "target_rate_dl_bps", cfg.target_rate_dl,
                               "sweep", origin);
  cfg.target_rate_ul = get_num(obj, "target_rate_ul_bps", cfg.target_rate_ul,
                               "sweep", origin);
  std::string eng =
      get_str(obj, "engines", engine_name(cfg.engines), "sweep", origin);
  if (eng == "analytic") {
    cfg.engines = EngineChoice::Analytic;
  } else if (eng == "montecarlo") {
    cfg.engines = EngineChoice::MonteCarlo;
  } else if (eng == "both") {
    cfg.engines = EngineChoice::Both;
  } else {
    fail(origin,
         "sweep.engines: expected \"analytic\", \"montecarlo\" or \"both\"");
  }
}

void parse_sim(const json& obj, SimSpec& sim, const std::string& origin) {
  check_keys(obj, "sim",
             {"region_half_width_m", "observation_half_width_m",
              "realizations", "drops_per_realization", "seed",
              "min_ues_per_cell", "ue_density_factor"},
             origin);
  sim.region_half_width = get_num(obj, "region_half_width_m",
                                  sim.region_half_width, "sim", origin);
  sim.observation_half_width = get_num(
      obj, "observation_half_width_m", sim.observation_half_width, "sim",
      origin);
  sim.realizations =
      get_int(obj, "realizations", sim.realizations, "sim", origin);
  sim.drops_per_realization = get_int(obj, "drops_per_realization",
                                      sim.drops_per_realization, "sim", origin);
  sim.seed = get_u64(obj, "seed", sim.seed, "sim", origin);
  sim.min_ues_per_cell =
      get_int(obj, "min_ues_per_cell", sim.min_ues_per_cell, "sim", origin);
  sim.ue_density_factor =
      get_num(obj, "ue_density_factor", sim.ue_density_factor, "sim", origin);
}

}  // namespace

NetworkConfig default_network() {
  NetworkConfig cfg;
  cfg.lambda_bs = 3.0e-6;
  cfg.eta = 4.0;
  cfg.p_dl = 5.0;
  cfg.p_ul_max = 2.0;
  cfg.rho = dbm_to_watt(-75.0);
  cfg.noise = dbm_to_watt(-90.0);
  cfg.beta_dl = db_to_linear(-75.0);
  cfg.beta_ul = 0.0;
  cfg.si_distribution = SiDistribution::Degenerate;
  return cfg;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid(21);
  for (int i = 0; i < 21; ++i) grid[i] = i / 20.0;
  return grid;
}

void SweepConfig::validate() const {
  network.validate();
  sim.validate();
  if (duplex.topologies.empty()) {
    throw std::invalid_argument("at least one topology is required");
  }
  if (!(duplex.guard_fraction >= 0.0)) {
    throw std::invalid_argument("guard_fraction must be non-negative");
  }
  if (!(duplex.bw_dl_hd > 0.0) || !(duplex.bw_ul_hd > 0.0)) {
    throw std::invalid_argument("half-duplex bandwidths must be positive");
  }
  if (grid.empty()) {
    throw std::invalid_argument("sweep grid must be non-empty");
  }
  for (double v : grid) {
    switch (axis) {
      case SweepAxis::Alpha:
        if (!(v >= 0.0 && v <= 1.0)) {
          throw std::invalid_argument("alpha grid values must lie in [0, 1]");
        }
        break;
      case SweepAxis::BetaDl:
        if (!std::isfinite(v)) {
          throw std::invalid_argument("beta_dl grid values must be finite dB");
        }
        break;
      case SweepAxis::TargetRate:
        if (!(v > 0.0)) {
          throw std::invalid_argument("target_rate grid values must be > 0");
        }
        break;
    }
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  if (!(target_rate_dl > 0.0) || !(target_rate_ul > 0.0)) {
    throw std::invalid_argument("target rates must be positive");
  }
  if (output.empty()) {
    throw std::invalid_argument("output path must be non-empty");
  }
}

SweepConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(origin, "line " + std::to_string(line_of_byte(text, e.byte)) +
                     ": invalid JSON (" + e.what() + ")");
  }
  if (!root.is_object()) fail(origin, "top level must be an object");
  check_keys(root, "config", {"network", "duplex", "sweep", "sim", "output"},
             origin);

  SweepConfig cfg;
  if (const json* v = find(root, "network")) {
    if (!v->is_object()) fail(origin, "network: expected an object");
    parse_network(*v, cfg.network, origin);
  }
  if (const json* v = find(root, "duplex")) {
    if (!v->is_object()) fail(origin, "duplex: expected an object");
    parse_duplex(*v, cfg.duplex, origin);
  }
  if (const json* v = find(root, "sweep")) {
    if (!v->is_object()) fail(origin, "sweep: expected an object");
    parse_sweep(*v, cfg, origin);
  }
  if (const json* v = find(root, "sim")) {
    if (!v->is_object()) fail(origin, "sim: expected an object");
    parse_sim(*v, cfg.sim, origin);
  }
  cfg.output = get_str(root, "output", cfg.output, "config", origin);

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    fail(origin, e.what());
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

const char* topology_name(Topology t) {
  return t == Topology::TwoNode ? "2nt" : "3nt";
}

const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Alpha:
      return "alpha";
    case SweepAxis::BetaDl:
      return "beta_dl";
    case SweepAxis::TargetRate:
      return "target_rate";
  }
  return "alpha";
}

const char* engine_name(EngineChoice e) {
  switch (e) {
    case EngineChoice::Analytic:
      return "analytic";
    case EngineChoice::MonteCarlo:
      return "montecarlo";
    case EngineChoice::Both:
      return "both";
  }
  return "both";
}

const char* pulse_name(PulseKind k) {
  return k == PulseKind::Rectangular ? "rectangular" : "triangular";
}

}  // namespace fdnet
