#include "fdnet/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fdnet {
namespace {

// Downlink transform probes sit at this quantile of the serving-distance
// law. A fixed distance would drift into the far tail at high density,
// where the phantom-victim acceptance collapses and the own-cell
// independence approximation is at its worst.
constexpr double kProbeQuantile = 0.4;
constexpr double kRateTolerance = 0.05;
constexpr double kKsTolerance = 0.02;

struct Point {
  double axis_value = 0.0;
  Topology topology = Topology::TwoNode;
};

struct PointResult {
  bool have_analytic = false;
  bool have_mc = false;
  AnalyticMetrics analytic{};
  McEstimate mc{};
  SpectralFactors factors{};
  BandPlan plan{};
  double truncation = 0.0;
  std::string error;
};

struct PointSetup {
  NetworkConfig network;
  double alpha;
  double target_dl;
  double target_ul;
};

PointSetup setup_for(const SweepConfig& cfg, double axis_value) {
  PointSetup s{cfg.network, cfg.alpha, cfg.target_rate_dl, cfg.target_rate_ul};
  switch (cfg.axis) {
    case SweepAxis::Alpha:
      s.alpha = axis_value;
      break;
    case SweepAxis::BetaDl:
      s.network.beta_dl = db_to_linear(axis_value);
      break;
    case SweepAxis::TargetRate:
      s.target_dl = axis_value;
      s.target_ul = axis_value;
      break;
  }
  return s;
}

PointResult compute_point(const SweepConfig& cfg, const Point& p,
                          bool want_analytic, bool want_mc,
                          double corrupt_c_dl_scale) {
  PointResult out;
  try {
    PointSetup s = setup_for(cfg, p.axis_value);
    out.plan = make_band_plan(cfg.duplex.bw_dl_hd, cfg.duplex.bw_ul_hd,
                              cfg.duplex.guard_fraction, s.alpha);
    out.factors =
        spectral_factors(out.plan, cfg.duplex.dl_pulse, cfg.duplex.ul_pulse);
    out.truncation = truncation_probability(s.network);
    if (want_analytic) {
      EvalContext ctx =
          make_context(s.network, p.topology, out.plan, out.factors);
      out.analytic = analytic_metrics(ctx, s.target_dl, s.target_ul);
      out.have_analytic = true;
    }
    if (want_mc) {
      SpectralFactors mc_factors = out.factors;
      mc_factors.c_dl *= corrupt_c_dl_scale;
      out.mc = estimate_metrics(s.network, p.topology, out.plan, mc_factors,
                                cfg.sim, s.target_dl, s.target_ul);
      out.have_mc = true;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

void run_pool(const SweepConfig& cfg, const std::vector<Point>& points,
              std::vector<PointResult>& results, bool want_analytic,
              bool want_mc, double corrupt_c_dl_scale) {
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      results[i] =
          compute_point(cfg, points[i], want_analytic, want_mc,
                        corrupt_c_dl_scale);
    }
  };
  std::size_t n_threads =
      std::min<std::size_t>(points.size(),
                            std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Rows come out in axis order no matter how the grid was written or which
// worker finishes first.
std::vector<Point> make_points(const SweepConfig& cfg) {
  std::vector<double> grid = cfg.grid;
  std::sort(grid.begin(), grid.end());
  std::vector<Point> points;
  points.reserve(grid.size() * cfg.duplex.topologies.size());
  for (double v : grid) {
    for (Topology t : cfg.duplex.topologies) points.push_back({v, t});
  }
  return points;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

const char kCsvHeader[] =
    "axis,topology,engine,rate_dl_bps,rate_ul_bps,outage_dl,outage_ul,"
    "rate_dl_se_bps,rate_ul_se_bps,outage_dl_se,outage_ul_se,"
    "i_dl_sq,i_ul_sq,c_dl_sq,c_ul_sq,delta_f_hz,truncation_prob";

std::vector<std::string> common_tail(const PointResult& r) {
  return {fmt(r.factors.i_dl), fmt(r.factors.i_ul), fmt(r.factors.c_dl),
          fmt(r.factors.c_ul), fmt(r.plan.delta_f), fmt(r.truncation)};
}

std::string plot_script_path(const std::string& csv_path) {
  std::string base = csv_path;
  if (base.size() > 4 && base.compare(base.size() - 4, 4, ".csv") == 0) {
    base.resize(base.size() - 4);
  }
  return base + ".plot.py";
}

void write_plot_script(const std::string& script_path,
                       const std::string& csv_path, SweepAxis axis) {
  std::string csv_name = csv_path;
  std::size_t slash = csv_name.find_last_of('/');
  if (slash != std::string::npos) csv_name = csv_name.substr(slash + 1);

  std::ofstream py(script_path, std::ios::binary);
  if (!py) return;
  py << "#!/usr/bin/env python3\n"
        "\"\"\"Plots the sweep CSV written next to this script.\"\"\"\n"
        "import csv\n"
        "import os\n"
        "from collections import defaultdict\n"
        "\n"
        "import matplotlib\n"
        "matplotlib.use(\"Agg\")\n"
        "import matplotlib.pyplot as plt\n"
        "\n"
        "CSV = os.path.join(os.path.dirname(os.path.abspath(__file__)), \""
     << csv_name
     << "\")\n"
        "AXIS_LABEL = \""
     << axis_name(axis)
     << "\"\n"
        "\n"
        "with open(CSV, newline=\"\") as f:\n"
        "    rows = list(csv.DictReader(r for r in f if not "
        "r.startswith(\"#\")))\n"
        "series = defaultdict(list)\n"
        "for r in rows:\n"
        "    series[(r[\"topology\"], r[\"engine\"])].append(r)\n"
        "\n"
        "metrics = [\n"
        "    (\"rate_dl_bps\", \"rate_dl_se_bps\", \"DL rate [bit/s]\"),\n"
        "    (\"rate_ul_bps\", \"rate_ul_se_bps\", \"UL rate [bit/s]\"),\n"
        "    (\"outage_dl\", \"outage_dl_se\", \"DL outage\"),\n"
        "    (\"outage_ul\", \"outage_ul_se\", \"UL outage\"),\n"
        "]\n"
        "fig, axes = plt.subplots(2, 2, figsize=(11, 8), sharex=True)\n"
        "for ax, (col, se_col, label) in zip(axes.flat, metrics):\n"
        "    for (topo, engine), pts in sorted(series.items()):\n"
        "        pts = sorted(pts, key=lambda r: float(r[\"axis\"]))\n"
        "        xs = [float(r[\"axis\"]) for r in pts]\n"
        "        ys = [float(r[col]) for r in pts]\n"
        "        name = f\"{topo} {engine}\"\n"
        "        if engine == \"montecarlo\" and pts[0][se_col]:\n"
        "            es = [float(r[se_col]) for r in pts]\n"
        "            ax.errorbar(xs, ys, yerr=es, marker=\"o\", ms=3, lw=1,\n"
        "                        capsize=2, label=name)\n"
        "        else:\n"
        "            ax.plot(xs, ys, lw=1.5, label=name)\n"
        "    ax.set_ylabel(label)\n"
        "    ax.grid(alpha=0.3)\n"
        "for ax in axes[-1]:\n"
        "    ax.set_xlabel(AXIS_LABEL)\n"
        "axes.flat[0].legend(fontsize=8)\n"
        "fig.tight_layout()\n"
        "out = CSV.rsplit(\".\", 1)[0] + \".png\"\n"
        "fig.savefig(out, dpi=150)\n"
        "print(\"wrote\", out)\n";
}

double rel_err(double value, double baseline) {
  return std::abs(value - baseline) / std::abs(baseline);
}

}  // namespace

int run_sweep(const SweepConfig& cfg, std::ostream& log) {
  cfg.validate();
  bool want_analytic = cfg.engines != EngineChoice::MonteCarlo;
  bool want_mc = cfg.engines != EngineChoice::Analytic;

  std::vector<Point> points = make_points(cfg);
  std::vector<PointResult> results(points.size());
  run_pool(cfg, points, results, want_analytic, want_mc, 1.0);

  std::ofstream csv(cfg.output, std::ios::binary);
  if (!csv) {
    log << "cannot open output file " << cfg.output << "\n";
    return kExitUsage;
  }
  csv << kCsvHeader << '\n';

  int failures = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const PointResult& r = results[i];
    if (!r.error.empty()) {
      ++failures;
      log << "point " << axis_name(cfg.axis) << "=" << p.axis_value << " "
          << topology_name(p.topology) << " failed: " << r.error << "\n";
      continue;
    }
    std::vector<std::string> tail = common_tail(r);
    if (r.have_analytic) {
      std::vector<std::string> cells = {
          fmt(p.axis_value),
          topology_name(p.topology),
          "analytic",
          fmt(r.analytic.rate_dl.value),
          fmt(r.analytic.rate_ul.value),
          fmt(r.analytic.outage_dl.value),
          fmt(r.analytic.outage_ul.value),
          "",
          "",
          "",
          ""};
      cells.insert(cells.end(), tail.begin(), tail.end());
      write_csv_row(csv, cells);
    }
    if (r.have_mc) {
      std::vector<std::string> cells = {fmt(p.axis_value),
                                        topology_name(p.topology),
                                        "montecarlo",
                                        fmt(r.mc.rate_dl),
                                        fmt(r.mc.rate_ul),
                                        fmt(r.mc.outage_dl),
                                        fmt(r.mc.outage_ul),
                                        fmt(r.mc.rate_dl_se),
                                        fmt(r.mc.rate_ul_se),
                                        fmt(r.mc.outage_dl_se),
                                        fmt(r.mc.outage_ul_se)};
      cells.insert(cells.end(), tail.begin(), tail.end());
      write_csv_row(csv, cells);
    }
  }
  if (failures > 0) {
    csv << "# incomplete: " << failures << " of " << points.size()
        << " points failed\n";
  }
  csv.flush();

  write_plot_script(plot_script_path(cfg.output), cfg.output, cfg.axis);

  log << "wrote " << cfg.output << " (" << points.size() - failures << "/"
      << points.size() << " points)\n";
  return failures > 0 ? kExitNumeric : kExitOk;
}

std::vector<double> lt_probe_s_values(const EvalContext& ctx, Link link,
                                      double r_o, int count) {
  auto transform = [&](double s) {
    return link == Link::Downlink ? lt_dl(ctx, r_o, s) : lt_ul(ctx, s);
  };
  // Bracket the two target levels in log space, then bisect each.
  auto solve = [&](double level) {
    double lo = 1.0;
    int guard = 0;
    while (transform(lo) < level) {
      lo /= 10.0;
      if (++guard > 400) {
        throw ConvergenceError("transform probe failed to bracket", lo, 0.0);
      }
    }
    double hi = lo;
    guard = 0;
    while (transform(hi) > level) {
      hi *= 10.0;
      if (++guard > 400) {
        throw ConvergenceError("transform probe failed to bracket", hi, 0.0);
      }
    }
    for (int i = 0; i < 80; ++i) {
      double mid = std::sqrt(lo * hi);
      (transform(mid) > level ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
  };
  double s_low = solve(0.9);
  double s_high = solve(0.1);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
    out[static_cast<std::size_t>(i)] =
        s_low * std::pow(s_high / s_low, t);
  }
  return out;
}

int cross_validate(const SweepConfig& cfg, std::ostream& log,
                   double corrupt_c_dl_scale) {
  cfg.validate();
  if (cfg.engines != EngineChoice::Both) {
    throw ConfigError("cross-validation requires engines = \"both\"");
  }

  std::vector<Point> points = make_points(cfg);
  std::vector<PointResult> results(points.size());
  run_pool(cfg, points, results, true, true, corrupt_c_dl_scale);

  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!results[i].error.empty()) {
      log << "point " << axis_name(cfg.axis) << "=" << points[i].axis_value
          << " " << topology_name(points[i].topology)
          << " failed: " << results[i].error << "\n";
      return kExitNumeric;
    }
  }

  bool pass = true;
  char line[256];
  log << "rate agreement (gate " << kRateTolerance * 100 << "% relative to "
      << "Monte Carlo):\n";
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    const PointResult& r = results[i];
    double dl = rel_err(r.analytic.rate_dl.value, r.mc.rate_dl);
    double ul = rel_err(r.analytic.rate_ul.value, r.mc.rate_ul);
    bool ok = dl <= kRateTolerance && ul <= kRateTolerance;
    pass = pass && ok;
    std::snprintf(line, sizeof line,
                  "  %s=%-8.4g %s  rate_dl %+.2f%%  rate_ul %+.2f%%  "
                  "outage_dl %+.4f  outage_ul %+.4f  %s\n",
                  axis_name(cfg.axis), p.axis_value,
                  topology_name(p.topology),
                  100.0 * (r.analytic.rate_dl.value - r.mc.rate_dl) /
                      r.mc.rate_dl,
                  100.0 * (r.analytic.rate_ul.value - r.mc.rate_ul) /
                      r.mc.rate_ul,
                  r.analytic.outage_dl.value - r.mc.outage_dl,
                  r.analytic.outage_ul.value - r.mc.outage_ul,
                  ok ? "ok" : "FAIL");
    log << line;
  }

  // Transform spot checks at the grid extremes (the sweep's fixed alpha
  // when the axis is not alpha).
  std::vector<double> alphas;
  if (cfg.axis == SweepAxis::Alpha) {
    alphas = {*std::min_element(cfg.grid.begin(), cfg.grid.end()),
              *std::max_element(cfg.grid.begin(), cfg.grid.end())};
    if (alphas[0] == alphas[1]) alphas.resize(1);
  } else {
    alphas = {cfg.alpha};
  }
  double r_probe = serving_distance_pdf(cfg.network).quantile(kProbeQuantile);
  std::snprintf(line, sizeof line,
                "interference-transform probes at r_o = %.1f m "
                "(gate 3 standard errors):\n",
                r_probe);
  log << line;
  try {
    for (double a : alphas) {
      BandPlan plan = make_band_plan(cfg.duplex.bw_dl_hd, cfg.duplex.bw_ul_hd,
                                     cfg.duplex.guard_fraction, a);
      SpectralFactors factors =
          spectral_factors(plan, cfg.duplex.dl_pulse, cfg.duplex.ul_pulse);
      for (Topology topo : cfg.duplex.topologies) {
        EvalContext ctx = make_context(cfg.network, topo, plan, factors);
        for (Link link : {Link::Downlink, Link::Uplink}) {
          std::vector<double> s = lt_probe_s_values(ctx, link, r_probe, 5);
          std::vector<Estimate> emp = empirical_lt(
              cfg.network, topo, factors, cfg.sim, link, s, r_probe);
          double worst = 0.0;
          for (std::size_t i = 0; i < s.size(); ++i) {
            double ana = link == Link::Downlink ? lt_dl(ctx, r_probe, s[i])
                                                : lt_ul(ctx, s[i]);
            double sigmas = std::abs(emp[i].value - ana) /
                            std::max(emp[i].error, 1e-12);
            worst = std::max(worst, sigmas);
          }
          bool ok = worst <= 3.0;
          pass = pass && ok;
          std::snprintf(line, sizeof line,
                        "  alpha=%-6.4g %s %s  worst |emp-analytic| = %.2f "
                        "standard errors  %s\n",
                        a, topology_name(topo),
                        link == Link::Downlink ? "dl" : "ul", worst,
                        ok ? "ok" : "FAIL");
          log << line;
        }
      }
    }

    double ks = serving_distance_ks(cfg.network, cfg.duplex.topologies.front(),
                                    cfg.sim);
    bool ks_ok = ks < kKsTolerance;
    pass = pass && ks_ok;
    std::snprintf(line, sizeof line,
                  "serving-distance KS = %.4f (gate %.2f)  %s\n", ks,
                  kKsTolerance, ks_ok ? "ok" : "FAIL");
    log << line;
  } catch (const std::exception& e) {
    log << "validation aborted: " << e.what() << "\n";
    return kExitNumeric;
  }

  log << (pass ? "VALIDATION PASS\n" : "VALIDATION FAIL\n");
  return pass ? kExitOk : kExitValidation;
}

}  // namespace fdnet
