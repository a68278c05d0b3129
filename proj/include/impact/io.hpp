#pragma once
//! \file io.hpp
//! \brief Key-value run configuration files and CSV output.
//!
//! Config files hold one `key = value` pair per line; `#` starts a comment.
//! Recognised keys:
//!
//!   m, t_final, gamma            scalars
//!   cfl | dt | steps_per_cell    time-step policy (at most one per file)
//!   shock_speed                  explicit S for steps_per_cell
//!   flux                         roe | roe-fds | exact
//!   final_step                   clip | overshoot
//!   entropy_fix                  true | false
//!   entropy_delta                Harten threshold / a_hat
//!   left, right                  "rho u p" triplets (commas also accepted)

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <span>
#include <system_error>
#include <variant>
#include <vector>

#include "impact/analysis.hpp"
#include "impact/solver.hpp"

namespace impact::io {

/// Shortest text that parses back to the same double (at most 17 digits).
inline std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), end};
}

inline double parse_double(std::string_view text, std::string_view key) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '+')) text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid number '" + std::string(text) + "' for " + std::string(key));
  }
  return v;
}

inline std::size_t parse_count(std::string_view text, std::string_view key) {
  const double v = parse_double(text, key);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw ConfigError("invalid integer '" + std::string(text) + "' for " + std::string(key));
  }
  return static_cast<std::size_t>(v);
}

inline std::vector<double> parse_list(std::string_view text, std::string_view key) {
  std::string s(text);
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_double(tok, key));
  return out;
}

inline PrimitiveState parse_state(std::string_view text, std::string_view key) {
  const auto v = parse_list(text, key);
  if (v.size() != 3) {
    throw ConfigError(std::string(key) + " needs three values: rho u p");
  }
  return {v[0], v[1], v[2]};
}

inline bool parse_bool(std::string_view text, std::string_view key) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + std::string(key));
}

inline FluxKind parse_flux(std::string_view text) {
  if (text == "roe") return FluxKind::roe;
  if (text == "roe-fds") return FluxKind::roe_fds;
  if (text == "exact") return FluxKind::exact;
  throw ConfigError("flux must be 'roe', 'roe-fds' or 'exact' (got '" + std::string(text) +
                    "')");
}

inline FinalStep parse_final_step(std::string_view text) {
  if (text == "clip") return FinalStep::clip;
  if (text == "overshoot") return FinalStep::overshoot;
  throw ConfigError("final_step must be 'clip' or 'overshoot' (got '" + std::string(text) +
                    "')");
}

/// One layer of settings; unset fields leave the lower layer untouched.
struct ConfigOverrides {
  std::optional<std::size_t> m;
  std::optional<double> t_final;
  std::optional<double> gamma;
  std::optional<double> cfl;
  std::optional<double> dt;
  std::optional<double> steps_per_cell;
  std::optional<double> shock_speed;
  std::optional<FluxKind> flux;
  std::optional<FinalStep> final_step;
  std::optional<bool> entropy_fix;
  std::optional<double> entropy_delta;
  std::optional<PrimitiveState> left;
  std::optional<PrimitiveState> right;

  [[nodiscard]] int policy_count() const {
    return int(cfl.has_value()) + int(dt.has_value()) + int(steps_per_cell.has_value());
  }

  void set(std::string_view key, std::string_view value) {
    if (key == "m") {
      m = parse_count(value, key);
    } else if (key == "t_final") {
      t_final = parse_double(value, key);
    } else if (key == "gamma") {
      gamma = parse_double(value, key);
    } else if (key == "cfl") {
      cfl = parse_double(value, key);
    } else if (key == "dt") {
      dt = parse_double(value, key);
    } else if (key == "steps_per_cell") {
      steps_per_cell = parse_double(value, key);
    } else if (key == "shock_speed") {
      shock_speed = parse_double(value, key);
    } else if (key == "flux") {
      flux = parse_flux(value);
    } else if (key == "final_step") {
      final_step = parse_final_step(value);
    } else if (key == "entropy_fix") {
      entropy_fix = parse_bool(value, key);
    } else if (key == "entropy_delta") {
      entropy_delta = parse_double(value, key);
    } else if (key == "left") {
      left = parse_state(value, key);
    } else if (key == "right") {
      right = parse_state(value, key);
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  }

  /// Applies this layer on top of `cfg`.  A layer naming any time-step
  /// policy replaces the policy below it.
  void apply(RunConfig& cfg) const {
    if (policy_count() > 1) {
      throw ConfigError("specify at most one of cfl, dt, steps_per_cell");
    }
    if (m) cfg.m = *m;
    if (t_final) cfg.t_final = *t_final;
    if (gamma) cfg.gas.gamma = *gamma;
    if (cfl) cfg.policy = FixedCfl{*cfl};
    if (dt) cfg.policy = FixedDt{*dt};
    if (steps_per_cell) cfg.policy = ShockLocked{*steps_per_cell, std::nullopt};
    if (shock_speed) {
      auto* lock = std::get_if<ShockLocked>(&cfg.policy);
      if (lock == nullptr) throw ConfigError("shock_speed requires steps_per_cell");
      lock->shock_speed = *shock_speed;
    }
    if (flux) cfg.flux = *flux;
    if (final_step) cfg.final_step = *final_step;
    if (entropy_fix) cfg.entropy_fix.enabled = *entropy_fix;
    if (entropy_delta) cfg.entropy_fix.delta_fraction = *entropy_delta;
    if (left) cfg.left_state = *left;
    if (right) cfg.right_state = *right;
  }
};

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline ConfigOverrides parse_config(std::istream& in) {
  ConfigOverrides layer;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    layer.set(trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return layer;
}

inline ConfigOverrides load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

inline std::string format_state(const PrimitiveState& q) {
  return format_double(q.rho) + " " + format_double(q.u) + " " + format_double(q.p);
}

/// Writes `cfg` in config-file form; feeding it back yields the same run.
inline void write_config(std::ostream& os, const RunConfig& cfg) {
  os << "m = " << cfg.m << '\n';
  os << "t_final = " << format_double(cfg.t_final) << '\n';
  os << "gamma = " << format_double(cfg.gas.gamma) << '\n';
  std::visit(
      [&os](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedCfl>) {
          os << "cfl = " << format_double(p.cfl) << '\n';
        } else if constexpr (std::is_same_v<P, FixedDt>) {
          os << "dt = " << format_double(p.dt) << '\n';
        } else {
          os << "steps_per_cell = " << format_double(p.steps_per_cell) << '\n';
          if (p.shock_speed) os << "shock_speed = " << format_double(*p.shock_speed) << '\n';
        }
      },
      cfg.policy);
  os << "flux = " << to_string(cfg.flux) << '\n';
  os << "final_step = " << to_string(cfg.final_step) << '\n';
  os << "entropy_fix = " << (cfg.entropy_fix.enabled ? "true" : "false") << '\n';
  os << "entropy_delta = " << format_double(cfg.entropy_fix.delta_fraction) << '\n';
  os << "left = " << format_state(cfg.left_state) << '\n';
  os << "right = " << format_state(cfg.right_state) << '\n';
}

/// Config echo followed by run statistics as comments.
inline void write_run_metadata(std::ostream& os, const RunConfig& cfg,
                               const SimulationResult& r) {
  write_config(os, cfg);
  os << "# steps_taken = " << r.steps_taken << '\n';
  os << "# t_reached = " << format_double(r.t_reached) << '\n';
  os << "# dt_used = " << format_double(r.dt_used) << '\n';
  os << "# dt_min = " << format_double(r.dt_min) << '\n';
  os << "# dt_max = " << format_double(r.dt_max) << '\n';
  os << "# effective_cfl = " << format_double(r.effective_cfl) << '\n';
  os << "# max_wave_speed = " << format_double(r.max_wave_speed) << '\n';
  if (std::isfinite(r.locked_shock_speed)) {
    os << "# locked_shock_speed = " << format_double(r.locked_shock_speed) << '\n';
  }
  os << "# wall_time = " << format_double(r.wall_time) << '\n';
}

inline void write_profile_csv(std::ostream& os, const SimulationResult& r,
                              std::span<const PrimitiveState> prims, const ImpactSolution& sol,
                              Field field) {
  os << "x,numerical,exact\n";
  for (std::size_t i = 0; i < r.grid.m; ++i) {
    const double x = r.grid.centers[i];
    os << format_double(x) << ',' << format_double(component(prims[i], field)) << ','
       << format_double(component(evaluate(sol, x, r.t_final), field)) << '\n';
  }
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

inline void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  os << "m,e_rho,kappa_rho,e_u,kappa_u,e_p,kappa_p\n";
  for (const auto& r : rows) {
    os << r.m << ',' << format_double(r.e_rho) << ',' << format_optional(r.kappa_rho) << ','
       << format_double(r.e_u) << ',' << format_optional(r.kappa_u) << ','
       << format_double(r.e_p) << ',' << format_optional(r.kappa_p) << '\n';
  }
}

struct SweepRow {
  double steps_per_cell = 0.0;
  double dt = 0.0;
  double effective_cfl = 0.0;
  OscillationReport report;
};

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "N,dt,effective_cfl,band_width,total_variation,alternation_fraction,cluster_count\n";
  for (const auto& r : rows) {
    os << format_double(r.steps_per_cell) << ',' << format_double(r.dt) << ','
       << format_double(r.effective_cfl) << ',' << format_double(r.report.band_width) << ','
       << format_double(r.report.total_variation) << ','
       << format_double(r.report.alternation_fraction) << ',' << r.report.cluster_count << '\n';
  }
}

/// Splits one CSV line on commas (no quoting; all emitted fields are numeric).
inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::vector<ConvergenceRow> read_convergence_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "m,e_rho,kappa_rho,e_u,kappa_u,e_p,kappa_p") {
    throw ConfigError("convergence CSV: bad header");
  }
  auto opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return parse_double(s, "kappa");
  };
  std::vector<ConvergenceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ConfigError("convergence CSV: expected 7 fields");
    rows.push_back({parse_count(f[0], "m"), parse_double(f[1], "e_rho"),
                    parse_double(f[3], "e_u"), parse_double(f[5], "e_p"), opt(f[2]), opt(f[4]),
                    opt(f[6])});
  }
  return rows;
}

}  // namespace impact::io
