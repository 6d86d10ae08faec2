#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fdnet/analytic.hpp"
#include "fdnet/config.hpp"
#include "fdnet/sweep.hpp"

namespace {

void print_factors(const fdnet::SweepConfig& cfg, double alpha) {
  fdnet::BandPlan plan =
      fdnet::make_band_plan(cfg.duplex.bw_dl_hd, cfg.duplex.bw_ul_hd,
                            cfg.duplex.guard_fraction, alpha);
  fdnet::SpectralFactors f =
      fdnet::spectral_factors(plan, cfg.duplex.dl_pulse, cfg.duplex.ul_pulse);
  std::printf("alpha        %.12g\n", alpha);
  std::printf("dl_pulse     %s\n", fdnet::pulse_name(cfg.duplex.dl_pulse));
  std::printf("ul_pulse     %s\n", fdnet::pulse_name(cfg.duplex.ul_pulse));
  std::printf("bw_dl_hz     %.12g\n", plan.bw_dl);
  std::printf("bw_ul_hz     %.12g\n", plan.bw_ul);
  std::printf("delta_f_hz   %.12g\n", plan.delta_f);
  std::printf("i_dl_sq      %.12g\n", f.i_dl);
  std::printf("i_ul_sq      %.12g\n", f.i_ul);
  std::printf("c_dl_sq      %.12g\n", f.c_dl);
  std::printf("c_ul_sq      %.12g\n", f.c_ul);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-duplex cellular network rate and outage toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string engine_str;
  std::uint64_t seed = 0;
  bool seed_set = false, out_set = false, engine_set = false;
  double corrupt_c_dl = 1.0;
  double factors_alpha = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--seed", seed, "override sim.seed")
        ->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--out", out_path, "override the output path")
        ->each([&](const std::string&) { out_set = true; });
    sub->add_option("--engine", engine_str,
                    "override engines: analytic, montecarlo or both")
        ->check(CLI::IsMember({"analytic", "montecarlo", "both"}))
        ->each([&](const std::string&) { engine_set = true; });
  };

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "run the sweep and write the CSV");
  add_common(sweep_cmd);

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "cross-validate the analytic engine against Monte Carlo");
  add_common(validate_cmd);
  validate_cmd
      ->add_option("--corrupt-c-dl-sq", corrupt_c_dl,
                   "test hook: scale the Monte Carlo engine's |C_d|^2")
      ->capture_default_str();

  CLI::App* factors_cmd = app.add_subcommand(
      "factors", "print the band plan and spectral factors for one alpha");
  add_common(factors_cmd);
  factors_cmd->add_option("--alpha", factors_alpha, "overlap fraction")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : fdnet::kExitUsage;
  }

  try {
    fdnet::SweepConfig cfg;
    if (!config_path.empty()) cfg = fdnet::load_config(config_path);
    if (seed_set) cfg.sim.seed = seed;
    if (out_set) cfg.output = out_path;
    if (engine_set) {
      cfg.engines = engine_str == "analytic" ? fdnet::EngineChoice::Analytic
                    : engine_str == "montecarlo"
                        ? fdnet::EngineChoice::MonteCarlo
                        : fdnet::EngineChoice::Both;
    }

    if (sweep_cmd->parsed()) return fdnet::run_sweep(cfg, std::cout);
    if (validate_cmd->parsed()) {
      return fdnet::cross_validate(cfg, std::cout, corrupt_c_dl);
    }
    print_factors(cfg, factors_alpha);
    return fdnet::kExitOk;
  } catch (const fdnet::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fdnet::kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fdnet::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fdnet::kExitNumeric;
  }
}
