#pragma once
//! \file solver.hpp
//! \brief First-order Godunov finite-volume solver for the 1D impact problem.
//!
//! Cell i is centred at x_i = -0.5 + i*dx (0-based, dx = 1/(m-1)) and covers
//! [x_i - dx/2, x_i + dx/2].  One ghost cell per side is frozen at the
//! initial left/right states, which acts as an inflow boundary for as long as
//! no wave reaches the domain edge.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "impact/euler.hpp"
#include "impact/riemann.hpp"

namespace impact {

/// Invalid run configuration (bad resolution, policy, or states).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A cell lost positivity during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(std::size_t step, std::size_t cell, const ConservativeState& state)
      : std::runtime_error("solver blow-up at step " + std::to_string(step) + ", cell " +
                           std::to_string(cell) + ": " + describe(state)),
        step_(step),
        cell_(cell),
        state_(state) {}

  [[nodiscard]] std::size_t step() const { return step_; }
  [[nodiscard]] std::size_t cell() const { return cell_; }
  [[nodiscard]] const ConservativeState& state() const { return state_; }

 private:
  std::size_t step_;
  std::size_t cell_;
  ConservativeState state_;
};

struct Grid {
  std::size_t m = 0;
  double dx = 0.0;
  std::vector<double> centers;

  [[nodiscard]] std::size_t size() const { return m; }
};

inline Grid build_grid(std::size_t m) {
  if (m < 3) {
    throw ConfigError("resolution m must satisfy m >= 3 (got " + std::to_string(m) + ")");
  }
  Grid g;
  g.m = m;
  g.dx = 1.0 / static_cast<double>(m - 1);
  g.centers.resize(m);
  // Built from the midpoint outwards so that x_{m-1-i} == -x_i bit for bit.
  const double half = 0.5 * static_cast<double>(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    g.centers[i] = (static_cast<double>(i) - half) * g.dx;
  }
  g.centers.front() = -0.5;
  g.centers.back() = 0.5;
  return g;
}

struct FixedCfl {
  double cfl = 0.9;
};
struct FixedDt {
  double dt = 1e-3;
};
/// dt = dx / (N * S): the shock crosses one cell every N steps.
struct ShockLocked {
  double steps_per_cell = 5.0;
  /// Unset: take S from the exact right-moving shock of the initial data.
  std::optional<double> shock_speed;
};

using TimeStepPolicy = std::variant<FixedCfl, FixedDt, ShockLocked>;

/// How constant-dt runs (FixedDt, ShockLocked) finish.  FixedCfl runs always
/// shrink dt so that an integer number of equal steps lands on t_final.
enum class FinalStep {
  /// Shorten the last step to land exactly on t_final.
  clip,
  /// Take whole steps until t >= t_final; the field ends at t_reached while
  /// errors are still measured at t_final.
  overshoot,
};

inline const char* to_string(FinalStep f) { return f == FinalStep::clip ? "clip" : "overshoot"; }

inline void validate(const TimeStepPolicy& policy) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedCfl>) {
          if (!(p.cfl > 0.0 && p.cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
        } else if constexpr (std::is_same_v<P, FixedDt>) {
          if (!(p.dt > 0.0) || !std::isfinite(p.dt)) throw ConfigError("dt must be > 0");
        } else {
          if (!(p.steps_per_cell > 0.0) || !std::isfinite(p.steps_per_cell)) {
            throw ConfigError("steps_per_cell must be > 0");
          }
          if (p.shock_speed && !(*p.shock_speed > 0.0)) {
            throw ConfigError("shock_speed must be > 0");
          }
        }
      },
      policy);
}

inline std::string describe(const TimeStepPolicy& policy) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FixedCfl>) {
          os << "fixed-cfl " << p.cfl;
        } else if constexpr (std::is_same_v<P, FixedDt>) {
          os << "fixed-dt " << p.dt;
        } else {
          os << "shock-locked " << p.steps_per_cell << " steps/cell";
          if (p.shock_speed) os << " at S = " << *p.shock_speed;
        }
      },
      policy);
  return os.str();
}

/// Defaults reproduce the symmetric impact problem: gamma = 1.4,
/// (1, +2, 1/gamma) | (1, -2, 1/gamma), integrated to t = 0.5.
struct RunConfig {
  std::size_t m = 401;
  double t_final = 0.5;
  GasModel gas{1.4};
  TimeStepPolicy policy = FixedCfl{0.9};
  FluxKind flux = FluxKind::roe;
  EntropyFix entropy_fix{};
  FinalStep final_step = FinalStep::clip;
  PrimitiveState left_state{1.0, 2.0, 1.0 / 1.4};
  PrimitiveState right_state{1.0, -2.0, 1.0 / 1.4};

  void validate() const {
    if (m < 3) {
      throw ConfigError("resolution m must satisfy m >= 3 (got " + std::to_string(m) + ")");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be > 0");
    if (!(gas.gamma > 1.0)) throw ConfigError("gamma must be > 1");
    if (!left_state.valid()) throw ConfigError("invalid left state " + describe(left_state));
    if (!right_state.valid()) throw ConfigError("invalid right state " + describe(right_state));
    if (entropy_fix.enabled) {
      if (flux != FluxKind::roe_fds) {
        throw ConfigError("entropy fix applies only to the roe-fds flux");
      }
      if (!(entropy_fix.delta_fraction > 0.0)) {
        throw ConfigError("entropy fix threshold must be > 0");
      }
    }
    impact::validate(policy);
  }
};

struct SimulationResult {
  Grid grid;
  std::vector<ConservativeState> final_states;
  std::size_t steps_taken = 0;
  /// Last step size, excluding a clipped final step.
  double dt_used = 0.0;
  double dt_min = 0.0;
  double dt_max = 0.0;
  /// Largest dt * Lambda / dx over all unclipped steps.
  double effective_cfl = 0.0;
  double max_wave_speed = 0.0;
  /// Time the errors are measured at (the configured end time).
  double t_final = 0.0;
  /// Time the field was advanced to; exceeds t_final only under overshoot.
  double t_reached = 0.0;
  /// Shock speed the locked time step was built from; NaN for other policies.
  double locked_shock_speed = std::numeric_limits<double>::quiet_NaN();
  double wall_time = 0.0;
  /// dx * sum U at t = 0.
  ConservativeState initial_total{0.0, 0.0, 0.0};
  /// Time integral of F(left boundary) - F(right boundary).
  ConservativeState boundary_inflow{0.0, 0.0, 0.0};
};

inline std::vector<ConservativeState> init_impact(const Grid& grid, const RunConfig& cfg) {
  const ConservativeState ul = prim_to_cons(cfg.left_state, cfg.gas);
  const ConservativeState ur = prim_to_cons(cfg.right_state, cfg.gas);
  std::vector<ConservativeState> states(grid.m);
  const double h = 0.5 * grid.dx;
  for (std::size_t i = 0; i < grid.m; ++i) {
    const double lo = grid.centers[i] - h;
    const double hi = grid.centers[i] + h;
    if (hi <= 0.0) {
      states[i] = ul;
    } else if (lo >= 0.0) {
      states[i] = ur;
    } else {
      const double w = (0.0 - lo) / grid.dx;
      states[i] = w * ul + (1.0 - w) * ur;
    }
  }
  return states;
}

inline std::vector<PrimitiveState> to_primitive(std::span<const ConservativeState> states,
                                                const GasModel& gas) {
  std::vector<PrimitiveState> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) out[i] = cons_to_prim(states[i], gas);
  return out;
}

/// Largest |Roe eigenvalue| over the m-1 interior interfaces.
inline double max_interface_speed(std::span<const PrimitiveState> prims, const GasModel& gas) {
  double lambda = 0.0;
  for (std::size_t i = 0; i + 1 < prims.size(); ++i) {
    lambda = std::max(lambda, roe_max_speed(prims[i], prims[i + 1], gas));
  }
  return lambda;
}

/// Right-moving shock speed of the exact solution for the configured data.
inline double locked_shock_speed(const RunConfig& cfg) {
  const auto& lock = std::get<ShockLocked>(cfg.policy);
  if (lock.shock_speed) return *lock.shock_speed;
  const StarState star = exact_star(cfg.left_state, cfg.right_state, cfg.gas);
  if (star.right_wave != WaveKind::shock || !(star.s_right > 0.0)) {
    throw ConfigError("shock-locked time step needs a right-moving shock in the initial data");
  }
  return star.s_right;
}

/// Equal steps no longer than `dt_max` that exactly cover `remaining`.
inline double landing_step(double remaining, double dt_max) {
  const double count = std::max(1.0, std::ceil(remaining / dt_max * (1.0 - 1e-12)));
  return remaining / count;
}

/// Raw step size for the policy; FixedCfl returns cfl * dx / Lambda before
/// any landing adjustment.
inline double compute_dt(std::span<const PrimitiveState> prims, const Grid& grid,
                         const TimeStepPolicy& policy, const GasModel& gas,
                         double shock_speed) {
  if (const auto* c = std::get_if<FixedCfl>(&policy)) {
    const double lambda = max_interface_speed(prims, gas);
    if (!(lambda > 0.0)) throw DomainError("zero wave speed: CFL time step undefined");
    return c->cfl * grid.dx / lambda;
  }
  if (const auto* d = std::get_if<FixedDt>(&policy)) return d->dt;
  const auto& lock = std::get<ShockLocked>(policy);
  if (!(shock_speed > 0.0)) throw ConfigError("shock-locked time step needs shock speed > 0");
  return grid.dx / (lock.steps_per_cell * shock_speed);
}

/// Owns the work arrays for repeated conservative updates.
class GodunovStepper {
 public:
  GodunovStepper(const Grid& grid, const RunConfig& cfg)
      : grid_(&grid),
        cfg_(&cfg),
        fluxes_(grid.m + 1),
        ghost_left_(cfg.left_state),
        ghost_right_(cfg.right_state) {}

  /// Evaluates all m+1 interface fluxes from `prims` and returns the
  /// largest |Roe eigenvalue| over the m-1 interior interfaces.
  double compute_fluxes(std::span<const PrimitiveState> prims) {
    const std::size_t m = prims.size();
    const GasModel& gas = cfg_->gas;
    const FluxKind kind = cfg_->flux;
    const EntropyFix fix = cfg_->entropy_fix;
    fluxes_[0] = interface_flux(kind, ghost_left_, prims[0], gas, fix);
    double lambda = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
      const FluxAndSpeed fs = interface_flux_and_speed(kind, prims[i - 1], prims[i], gas, fix);
      fluxes_[i] = fs.flux;
      lambda = std::max(lambda, fs.max_speed);
    }
    fluxes_[m] = interface_flux(kind, prims[m - 1], ghost_right_, gas, fix);
    return lambda;
  }

  /// Conservative update with the fluxes from the last compute_fluxes call.
  /// Refreshes `prims`; returns the (left, right) boundary fluxes.
  std::pair<FluxVector, FluxVector> apply(std::span<ConservativeState> states,
                                          std::span<PrimitiveState> prims, double dt,
                                          std::size_t step_index) {
    const std::size_t m = states.size();
    const GasModel& gas = cfg_->gas;
    const double nu = dt / grid_->dx;
    for (std::size_t i = 0; i < m; ++i) {
      const FluxVector df = fluxes_[i + 1] - fluxes_[i];
      ConservativeState& u = states[i];
      u.rho -= nu * df.mass;
      u.mom -= nu * df.momentum;
      u.ener -= nu * df.energy;
      try {
        prims[i] = cons_to_prim(u, gas);
      } catch (const DomainError&) {
        throw BlowUpError(step_index, i, u);
      }
    }
    return {fluxes_[0], fluxes_[m]};
  }

  std::pair<FluxVector, FluxVector> advance(std::span<ConservativeState> states,
                                            std::span<PrimitiveState> prims, double dt,
                                            std::size_t step_index) {
    compute_fluxes(prims);
    return apply(states, prims, dt, step_index);
  }

 private:
  const Grid* grid_;
  const RunConfig* cfg_;
  std::vector<FluxVector> fluxes_;
  PrimitiveState ghost_left_;
  PrimitiveState ghost_right_;
};

/// Single conservative update; convenience wrapper over GodunovStepper.
inline std::vector<ConservativeState> step(std::span<const ConservativeState> states,
                                           const Grid& grid, double dt, const RunConfig& cfg,
                                           std::size_t step_index = 0) {
  std::vector<ConservativeState> next(states.begin(), states.end());
  std::vector<PrimitiveState> prims = to_primitive(states, cfg.gas);
  GodunovStepper stepper(grid, cfg);
  stepper.advance(next, prims, dt, step_index);
  return next;
}

/// Called after each completed step with (steps done, time, primitives).
using StepObserver =
    std::function<void(std::size_t, double, std::span<const PrimitiveState>)>;

inline ConservativeState total(std::span<const ConservativeState> states, double dx) {
  ConservativeState sum{0.0, 0.0, 0.0};
  for (const auto& u : states) sum += u;
  return dx * sum;
}

inline SimulationResult run(const RunConfig& cfg, const StepObserver& observer = {}) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();

  SimulationResult result;
  result.grid = build_grid(cfg.m);
  result.t_final = cfg.t_final;
  const Grid& grid = result.grid;

  std::vector<ConservativeState> states = init_impact(grid, cfg);
  std::vector<PrimitiveState> prims = to_primitive(states, cfg.gas);
  result.initial_total = total(states, grid.dx);

  double shock_speed = std::numeric_limits<double>::quiet_NaN();
  if (std::holds_alternative<ShockLocked>(cfg.policy)) {
    shock_speed = locked_shock_speed(cfg);
    result.locked_shock_speed = shock_speed;
  }
  const bool adaptive = std::holds_alternative<FixedCfl>(cfg.policy);
  const double fixed_dt =
      adaptive ? 0.0 : compute_dt(prims, grid, cfg.policy, cfg.gas, shock_speed);

  GodunovStepper stepper(grid, cfg);
  const double cfl = adaptive ? std::get<FixedCfl>(cfg.policy).cfl : 0.0;
  const bool overshoot = !adaptive && cfg.final_step == FinalStep::overshoot;
  // Steps of a constant-dt run, counted up front so that roundoff in the
  // accumulated time cannot add a sliver step at the end.
  const std::size_t whole_steps =
      adaptive ? 0
               : std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
                                              cfg.t_final / fixed_dt * (1.0 - 1e-12))));
  double t = 0.0;
  std::size_t n = 0;
  double courant_max = 0.0;
  result.dt_min = std::numeric_limits<double>::infinity();
  ConservativeState inflow{0.0, 0.0, 0.0};
  bool done = false;
  while (!done) {
    const double lambda = stepper.compute_fluxes(prims);
    result.max_wave_speed = std::max(result.max_wave_speed, lambda);
    const double remaining = cfg.t_final - t;
    double dt = 0.0;
    bool clipped = false;
    if (adaptive) {
      if (!(lambda > 0.0)) throw DomainError("zero wave speed: CFL time step undefined");
      dt = landing_step(remaining, cfl * grid.dx / lambda);
      done = dt >= remaining;
    } else if (overshoot) {
      dt = fixed_dt;
      done = n + 1 >= whole_steps;
    } else {
      dt = fixed_dt;
      if (n + 1 >= whole_steps) {
        // Last step lands on t_final; it is a genuine clip only when
        // noticeably shorter than dt.
        clipped = remaining < fixed_dt * (1.0 - 1e-9);
        dt = remaining;
        done = true;
      }
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("invalid time step");
    if (!clipped) {
      result.dt_used = dt;
      result.dt_min = std::min(result.dt_min, dt);
      result.dt_max = std::max(result.dt_max, dt);
      courant_max = std::max(courant_max, dt * lambda);
    }
    const auto [f_left, f_right] = stepper.apply(states, prims, dt, n);
    const FluxVector net = dt * (f_left - f_right);
    inflow += ConservativeState{net.mass, net.momentum, net.energy};
    ++n;
    t = (done && !overshoot) ? cfg.t_final : t + dt;
    if (observer) observer(n, t, prims);
  }
  if (!std::isfinite(result.dt_min)) {
    // The whole run was a single clipped step.
    result.dt_used = result.dt_min = result.dt_max = cfg.t_final;
    courant_max = cfg.t_final * result.max_wave_speed;
  }
  result.t_reached = t;
  result.steps_taken = n;
  result.effective_cfl = courant_max / grid.dx;
  result.boundary_inflow = inflow;
  result.final_states = std::move(states);
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

inline std::vector<PrimitiveState> final_primitives(const SimulationResult& r,
                                                    const GasModel& gas) {
  return to_primitive(r.final_states, gas);
}

}  // namespace impact
