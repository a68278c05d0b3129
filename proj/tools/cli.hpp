#pragma once
// Command-line driver: `run`, `converge` and `sweep-dt`.
//
// Settings are layered: built-in impact defaults, then --config file, then
// individual flags.  Exit codes: 0 success, 2 configuration error, 3 solver
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "impact/analysis.hpp"
#include "impact/io.hpp"
#include "impact/reference.hpp"
#include "impact/solver.hpp"

namespace impact::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

/// Four significant digits for human-readable summaries.
inline std::string sig4(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

/// Flags shared by every subcommand; each maps onto a config-file key.
struct CommonFlags {
  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::pair<std::string, std::string>> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  bool entropy_fix = false;

  void attach(CLI::App& app, bool with_m, bool with_policy) {
    struct FlagDef {
      const char* flag;
      const char* key;
      const char* help;
    };
    std::vector<FlagDef> defs = {
        {"--t-final", "t_final", "End time (default 0.5)"},
        {"--gamma", "gamma", "Ratio of specific heats (default 1.4)"},
        {"--shock-speed", "shock_speed", "Explicit shock speed for --steps-per-cell"},
        {"--flux", "flux", "Interface flux: roe | roe-fds | exact (default roe)"},
        {"--entropy-delta", "entropy_delta", "Harten threshold as a fraction of a_hat"},
        {"--final-step", "final_step", "Constant-dt finish: clip | overshoot (default clip)"},
        {"--left", "left", "Left state \"rho,u,p\""},
        {"--right", "right", "Right state \"rho,u,p\""},
    };
    if (with_m) defs.push_back({"--m", "m", "Number of cells (m >= 3)"});
    if (with_policy) {
      defs.push_back({"--cfl", "cfl", "Fixed CFL number (default 0.9)"});
      defs.push_back({"--dt", "dt", "Fixed time step"});
      defs.push_back({"--steps-per-cell", "steps_per_cell", "Shock-locked steps per cell N"});
    }
    // Sized once: CLI11 keeps pointers into `values`.
    values.resize(defs.size());
    options.resize(defs.size());
    for (std::size_t i = 0; i < defs.size(); ++i) {
      values[i].first = defs[i].key;
      options[i] = {defs[i].key, app.add_option(defs[i].flag, values[i].second, defs[i].help)};
    }
    app.add_option("--config", config_path, "Key-value config file");
    app.add_option("--out-dir", out_dir, "Output directory (default .)");
    app.add_flag("--entropy-fix", entropy_fix, "Enable Harten's entropy fix (roe-fds only)");
  }

  /// Defaults, then the config file, then flags.
  [[nodiscard]] RunConfig resolve(RunConfig cfg = {}) const {
    if (!config_path.empty()) io::load_config(config_path).apply(cfg);
    io::ConfigOverrides flags;
    for (std::size_t i = 0; i < options.size(); ++i) {
      if (options[i].second->count() > 0) flags.set(values[i].first, values[i].second);
    }
    if (entropy_fix) flags.entropy_fix = true;
    flags.apply(cfg);
    return cfg;
  }
};

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::filesystem::path p(dir);
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

inline void print_row(std::ostream& out, const ConvergenceRow& r) {
  auto k = [](const std::optional<double>& v) { return v ? sig4(*v) : std::string("--"); };
  out << std::setw(8) << r.m << "  " << std::setw(10) << sig4(r.e_rho) << std::setw(8)
      << k(r.kappa_rho) << "  " << std::setw(10) << sig4(r.e_u) << std::setw(8) << k(r.kappa_u)
      << "  " << std::setw(10) << sig4(r.e_p) << std::setw(8) << k(r.kappa_p) << '\n';
}

inline int cmd_run(const RunConfig& cfg, const std::string& out_dir, std::ostream& out) {
  cfg.validate();
  const auto dir = prepare_out_dir(out_dir);
  const ImpactSolution sol = build_impact_solution(cfg);
  const SimulationResult r = run(cfg);
  const auto prims = final_primitives(r, cfg.gas);

  for (Field f : {Field::rho, Field::u, Field::p}) {
    auto os = open_output(dir / (std::string("profile_") + to_string(f) + ".csv"));
    io::write_profile_csv(os, r, prims, sol, f);
  }
  {
    auto os = open_output(dir / "run_metadata.txt");
    io::write_run_metadata(os, cfg, r);
  }

  out << "m = " << cfg.m << ", flux = " << to_string(cfg.flux) << ", "
      << describe(cfg.policy) << '\n';
  out << "steps = " << r.steps_taken << ", dt = " << sig4(r.dt_used)
      << ", effective CFL = " << sig4(r.effective_cfl) << ", t = " << sig4(r.t_reached) << '\n';
  out << "L1 errors: rho = " << sig4(l1_error(r.grid, prims, sol, r.t_final, Field::rho))
      << ", u = " << sig4(l1_error(r.grid, prims, sol, r.t_final, Field::u))
      << ", p = " << sig4(l1_error(r.grid, prims, sol, r.t_final, Field::p)) << '\n';
  out << "wall time = " << sig4(r.wall_time) << " s\n";
  return kExitOk;
}

inline int cmd_converge(const RunConfig& cfg, std::vector<std::size_t> resolutions,
                        unsigned jobs, const std::string& out_dir, std::ostream& out) {
  if (resolutions.empty()) throw ConfigError("empty resolution list");
  for (std::size_t m : resolutions) {
    RunConfig probe = cfg;
    probe.m = m;
    probe.validate();
  }
  const auto dir = prepare_out_dir(out_dir);
  const ImpactSolution sol = build_impact_solution(cfg);
  const auto rows = convergence_study(resolutions, cfg, sol, jobs);
  {
    auto os = open_output(dir / "convergence.csv");
    io::write_convergence_csv(os, rows);
  }
  {
    auto os = open_output(dir / "run_metadata.txt");
    io::write_config(os, cfg);
  }
  out << "flux = " << to_string(cfg.flux) << ", " << describe(cfg.policy) << '\n';
  out << std::setw(8) << "m" << "  " << std::setw(10) << "e_rho" << std::setw(8) << "k" << "  "
      << std::setw(10) << "e_u" << std::setw(8) << "k" << "  " << std::setw(10) << "e_p"
      << std::setw(8) << "k" << '\n';
  for (const auto& r : rows) print_row(out, r);
  return kExitOk;
}

inline int cmd_sweep_dt(const RunConfig& base, const std::vector<double>& ns,
                        std::size_t margin, const std::string& out_dir, std::ostream& out) {
  if (ns.empty()) throw ConfigError("empty steps-per-cell list");
  std::optional<double> speed;
  if (const auto* lock = std::get_if<ShockLocked>(&base.policy)) speed = lock->shock_speed;
  std::vector<RunConfig> cfgs;
  for (double n : ns) {
    if (!(n > 0.0)) throw ConfigError("steps per cell must be > 0");
    RunConfig cfg = base;
    cfg.policy = ShockLocked{n, speed};
    cfg.validate();
    cfgs.push_back(cfg);
  }
  const auto dir = prepare_out_dir(out_dir);
  const ImpactSolution sol = build_impact_solution(base);
  std::vector<io::SweepRow> rows;
  for (const auto& cfg : cfgs) {
    const SimulationResult r = run(cfg);
    rows.push_back({std::get<ShockLocked>(cfg.policy).steps_per_cell, r.dt_used,
                    r.effective_cfl, oscillation_report(r, sol, margin)});
  }
  {
    auto os = open_output(dir / "sweep.csv");
    io::write_sweep_csv(os, rows);
  }
  out << "m = " << base.m << ", margin = " << margin << " cells\n";
  for (const auto& r : rows) {
    out << "N = " << sig4(r.steps_per_cell) << ": dt = " << sig4(r.dt)
        << ", CFL = " << sig4(r.effective_cfl) << ", band = " << sig4(r.report.band_width)
        << ", TV = " << sig4(r.report.total_variation)
        << ", alternation = " << sig4(r.report.alternation_fraction)
        << ", clusters = " << r.report.cluster_count << '\n';
  }
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Godunov impact-problem laboratory"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "Single simulation with profile CSVs");
  run_flags.attach(*run_cmd, true, true);

  CommonFlags conv_flags;
  auto* conv_cmd = app.add_subcommand("converge", "Grid convergence study");
  conv_flags.attach(*conv_cmd, false, true);
  std::size_t min_m = 51;
  std::size_t max_m = 1601;
  std::vector<std::size_t> resolutions;
  unsigned jobs = 0;
  conv_cmd->add_option("--min-m", min_m, "Coarsest resolution (default 51)");
  conv_cmd->add_option("--max-m", max_m, "Finest resolution (default 1601)");
  auto* res_opt = conv_cmd->add_option("--resolutions", resolutions,
                                       "Explicit doubling-family list, e.g. 51,101,201")
                      ->delimiter(',')
                      ->expected(0, -1);
  conv_cmd->add_option("--jobs", jobs, "Concurrent member runs (default: all cores)");

  CommonFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep-dt", "Shock-locked time-step sweep");
  sweep_flags.attach(*sweep_cmd, true, false);
  std::vector<double> ns;
  std::size_t margin = 10;
  sweep_cmd->add_option("--n,--steps-per-cell", ns, "Steps-per-cell values, e.g. 5,5.5")
      ->delimiter(',')
      ->expected(0, -1);
  sweep_cmd->add_option("--margin", margin, "Cells trimmed at shocks and contact (default 10)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_flags.resolve(), run_flags.out_dir, out);
    }
    if (conv_cmd->parsed()) {
      const RunConfig cfg = conv_flags.resolve();
      std::vector<std::size_t> ms =
          res_opt->count() > 0 ? resolutions : doubling_family(min_m, max_m);
      return cmd_converge(cfg, std::move(ms), jobs, conv_flags.out_dir, out);
    }
    // Seeded as shock-locked so --shock-speed has a policy to attach to.
    RunConfig seed;
    seed.policy = ShockLocked{};
    const RunConfig cfg = sweep_flags.resolve(seed);
    return cmd_sweep_dt(cfg, ns, margin, sweep_flags.out_dir, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const StudyError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace impact::cli
