#pragma once
//! \file reference.hpp
//! \brief Entropy-satisfying exact solution of a two-state Riemann problem
//! centred at x = 0, used as the error reference.

#include "impact/riemann.hpp"
#include "impact/solver.hpp"

namespace impact {

struct ImpactSolution {
  StarState star;
  PrimitiveState left_state;
  PrimitiveState right_state;
  GasModel gas;
  /// Outer speed of the right wave; the shock speed for impact data.
  double shock_speed = 0.0;
};

inline ImpactSolution build_impact_solution(const RunConfig& cfg) {
  ImpactSolution sol;
  sol.left_state = cfg.left_state;
  sol.right_state = cfg.right_state;
  sol.gas = cfg.gas;
  sol.star = exact_star(cfg.left_state, cfg.right_state, cfg.gas);
  sol.shock_speed = sol.star.s_right;
  return sol;
}

inline PrimitiveState evaluate(const ImpactSolution& sol, double x, double t) {
  if (t <= 0.0) return x < 0.0 ? sol.left_state : sol.right_state;
  return exact_sample(sol.star, sol.left_state, sol.right_state, x / t, sol.gas);
}

}  // namespace impact
