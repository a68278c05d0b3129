#pragma once
//! \file riemann.hpp
//! \brief Exact and Roe Riemann solvers for the ideal-gas Euler equations.
//!
//! The exact solver follows the classical two-nonlinear-wave construction
//! (Toro, "Riemann Solvers and Numerical Methods for Fluid Dynamics", ch. 4):
//! find p* from f_L(p) + f_R(p) + (u_R - u_L) = 0, then classify each outer
//! wave as a shock (p* > p_K) or rarefaction (p* <= p_K).
//!
//! The Roe solver upwinds the three characteristic waves of the flux Jacobian
//! evaluated at the sqrt(rho)-weighted average state (Roe, JCP 43, 1981).

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "impact/euler.hpp"

namespace impact {

/// The two initial states separate fast enough to open a vacuum.
class VacuumError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class WaveKind { shock, rarefaction };

inline const char* to_string(WaveKind k) {
  return k == WaveKind::shock ? "shock" : "rarefaction";
}

/// Star region of an exact Riemann solution.
///
/// `s_left`/`s_right` are the outermost speeds of each wave: the shock speed
/// for a shock, the head speed for a rarefaction.  `left_tail`/`right_tail`
/// give the inner edge of a rarefaction fan and equal the outer speed for a
/// shock.
struct StarState {
  double p_star = 0.0;
  double u_star = 0.0;
  double rho_star_left = 0.0;
  double rho_star_right = 0.0;
  WaveKind left_wave = WaveKind::rarefaction;
  WaveKind right_wave = WaveKind::rarefaction;
  double s_left = 0.0;
  double s_right = 0.0;
  double left_tail = 0.0;
  double right_tail = 0.0;
  int iterations = 0;

  [[nodiscard]] PrimitiveState star_left() const { return {rho_star_left, u_star, p_star}; }
  [[nodiscard]] PrimitiveState star_right() const { return {rho_star_right, u_star, p_star}; }
};

namespace detail {

struct PressureBranch {
  double value;
  double slope;
};

/// f_K(p) and f_K'(p) for one side of the Riemann problem.
inline PressureBranch pressure_branch(double p, const PrimitiveState& side, double a,
                                      const GasModel& gas) {
  const double g = gas.gamma;
  if (p > side.p) {
    const double A = 2.0 / ((g + 1.0) * side.rho);
    const double B = (g - 1.0) / (g + 1.0) * side.p;
    const double root = std::sqrt(A / (p + B));
    return {(p - side.p) * root, root * (1.0 - 0.5 * (p - side.p) / (p + B))};
  }
  const double ratio = p / side.p;
  const double value = 2.0 * a / (g - 1.0) * (std::pow(ratio, (g - 1.0) / (2.0 * g)) - 1.0);
  const double slope = 1.0 / (side.rho * a) * std::pow(ratio, -(g + 1.0) / (2.0 * g));
  return {value, slope};
}

inline double star_density(double p_star, const PrimitiveState& side, const GasModel& gas) {
  const double ratio = p_star / side.p;
  if (p_star > side.p) {
    const double gm = (gas.gamma - 1.0) / (gas.gamma + 1.0);
    return side.rho * (ratio + gm) / (gm * ratio + 1.0);
  }
  return side.rho * std::pow(ratio, 1.0 / gas.gamma);
}

inline double shock_mach_factor(double p_star, const PrimitiveState& side, const GasModel& gas) {
  const double g = gas.gamma;
  return std::sqrt((g + 1.0) / (2.0 * g) * p_star / side.p + (g - 1.0) / (2.0 * g));
}

}  // namespace detail

/// Residual of the pressure function at p; zero at the star pressure.
inline double pressure_function(double p, const PrimitiveState& left, const PrimitiveState& right,
                                const GasModel& gas) {
  const double aL = sound_speed(left, gas);
  const double aR = sound_speed(right, gas);
  return detail::pressure_branch(p, left, aL, gas).value +
         detail::pressure_branch(p, right, aR, gas).value + (right.u - left.u);
}

inline StarState exact_star(const PrimitiveState& left, const PrimitiveState& right,
                            const GasModel& gas) {
  require_valid(left);
  require_valid(right);
  const double g = gas.gamma;
  const double aL = sound_speed(left, gas);
  const double aR = sound_speed(right, gas);
  const double du = right.u - left.u;
  if (2.0 * (aL + aR) / (g - 1.0) <= du) {
    throw VacuumError("initial states generate a vacuum: du = " + std::to_string(du));
  }

  auto residual = [&](double p, double* slope) {
    const auto fl = detail::pressure_branch(p, left, aL, gas);
    const auto fr = detail::pressure_branch(p, right, aR, gas);
    if (slope != nullptr) *slope = fl.slope + fr.slope;
    return fl.value + fr.value + du;
  };

  constexpr double kTol = 1e-12;
  constexpr int kMaxNewton = 100;

  // Two-rarefaction guess.
  const double z = (g - 1.0) / (2.0 * g);
  double p = std::pow((aL + aR - 0.5 * (g - 1.0) * du) /
                          (aL / std::pow(left.p, z) + aR / std::pow(right.p, z)),
                      1.0 / z);
  bool converged = false;
  int iterations = 0;
  if (std::isfinite(p) && p > 0.0) {
    for (; iterations < kMaxNewton; ++iterations) {
      double slope = 0.0;
      const double f = residual(p, &slope);
      if (!(slope > 0.0) || !std::isfinite(f)) break;
      double next = p - f / slope;
      if (!(next > 0.0)) next = 0.5 * p;
      const double change = std::abs(next - p) / (0.5 * (next + p));
      p = next;
      if (change <= kTol) {
        converged = true;
        ++iterations;
        break;
      }
    }
  }

  if (!converged) {
    // Bisection on [1e-12, p_max]; the residual is monotone increasing in p.
    double lo = 1e-12;
    double hi = std::max(left.p, right.p);
    int expand = 0;
    while (residual(hi, nullptr) < 0.0) {
      hi *= 2.0;
      if (++expand > 200) throw ConvergenceError("cannot bracket star pressure");
    }
    if (residual(lo, nullptr) > 0.0) {
      throw ConvergenceError("star pressure below bracket floor");
    }
    for (int it = 0; it < 400 && (hi - lo) > kTol * hi; ++it, ++iterations) {
      const double mid = 0.5 * (lo + hi);
      (residual(mid, nullptr) < 0.0 ? lo : hi) = mid;
    }
    if ((hi - lo) > kTol * hi) throw ConvergenceError("star pressure bisection stalled");
    p = 0.5 * (lo + hi);
  }

  StarState s;
  s.iterations = iterations;
  s.p_star = p;
  const double fl = detail::pressure_branch(p, left, aL, gas).value;
  const double fr = detail::pressure_branch(p, right, aR, gas).value;
  s.u_star = 0.5 * (left.u + right.u) + 0.5 * (fr - fl);
  s.rho_star_left = detail::star_density(p, left, gas);
  s.rho_star_right = detail::star_density(p, right, gas);

  if (p > left.p) {
    s.left_wave = WaveKind::shock;
    s.s_left = left.u - aL * detail::shock_mach_factor(p, left, gas);
    s.left_tail = s.s_left;
  } else {
    s.left_wave = WaveKind::rarefaction;
    s.s_left = left.u - aL;
    s.left_tail = s.u_star - std::sqrt(g * p / s.rho_star_left);
  }
  if (p > right.p) {
    s.right_wave = WaveKind::shock;
    s.s_right = right.u + aR * detail::shock_mach_factor(p, right, gas);
    s.right_tail = s.s_right;
  } else {
    s.right_wave = WaveKind::rarefaction;
    s.s_right = right.u + aR;
    s.right_tail = s.u_star + std::sqrt(g * p / s.rho_star_right);
  }
  return s;
}

/// Self-similar solution at xi = x/t.  Points exactly on a shock take the
/// star (post-shock) value.
inline PrimitiveState exact_sample(const StarState& s, const PrimitiveState& left,
                                   const PrimitiveState& right, double xi, const GasModel& gas) {
  const double g = gas.gamma;
  if (xi <= s.u_star) {
    if (s.left_wave == WaveKind::shock) {
      return xi < s.s_left ? left : s.star_left();
    }
    if (xi < s.s_left) return left;
    if (xi > s.left_tail) return s.star_left();
    const double aL = sound_speed(left, gas);
    const double c = 2.0 / (g + 1.0) + (g - 1.0) / ((g + 1.0) * aL) * (left.u - xi);
    return {left.rho * std::pow(c, 2.0 / (g - 1.0)),
            2.0 / (g + 1.0) * (aL + 0.5 * (g - 1.0) * left.u + xi),
            left.p * std::pow(c, 2.0 * g / (g - 1.0))};
  }
  if (s.right_wave == WaveKind::shock) {
    return xi > s.s_right ? right : s.star_right();
  }
  if (xi > s.s_right) return right;
  if (xi < s.right_tail) return s.star_right();
  const double aR = sound_speed(right, gas);
  const double c = 2.0 / (g + 1.0) - (g - 1.0) / ((g + 1.0) * aR) * (right.u - xi);
  return {right.rho * std::pow(c, 2.0 / (g - 1.0)),
          2.0 / (g + 1.0) * (-aR + 0.5 * (g - 1.0) * right.u + xi),
          right.p * std::pow(c, 2.0 * g / (g - 1.0))};
}

/// Godunov flux from the exact solution sampled on the interface.
inline FluxVector exact_flux(const PrimitiveState& left, const PrimitiveState& right,
                             const GasModel& gas) {
  if (left == right) return physical_flux(left, gas);
  const StarState s = exact_star(left, right, gas);
  return physical_flux(exact_sample(s, left, right, 0.0, gas), gas);
}

// ---------------------------------------------------------------------------
// Roe

struct RoeAverages {
  double rho_hat = 0.0;
  double u_hat = 0.0;
  double h_hat = 0.0;
  double a_hat = 0.0;
  std::array<double, 3> lambda{};
  std::array<double, 3> wave_strengths{};

  /// Right eigenvector k as (mass, momentum, energy).
  [[nodiscard]] ConservativeState eigenvector(int k) const {
    switch (k) {
      case 0:
        return {1.0, u_hat - a_hat, h_hat - u_hat * a_hat};
      case 1:
        return {1.0, u_hat, 0.5 * u_hat * u_hat};
      default:
        return {1.0, u_hat + a_hat, h_hat + u_hat * a_hat};
    }
  }
};

struct EntropyFix {
  bool enabled = false;
  /// Harten threshold as a fraction of the Roe sound speed.
  double delta_fraction = 0.1;
};

inline RoeAverages roe_averages(const PrimitiveState& left, const PrimitiveState& right,
                                const GasModel& gas) {
  const double sl = std::sqrt(left.rho);
  const double sr = std::sqrt(right.rho);
  const double inv = 1.0 / (sl + sr);
  RoeAverages r;
  r.rho_hat = sl * sr;
  r.u_hat = (sl * left.u + sr * right.u) * inv;
  r.h_hat = (sl * total_enthalpy(left, gas) + sr * total_enthalpy(right, gas)) * inv;
  const double a2 = (gas.gamma - 1.0) * (r.h_hat - 0.5 * r.u_hat * r.u_hat);
  if (!(a2 > 0.0)) {
    throw DomainError("Roe average has non-positive a^2 for " + describe(left) + " | " +
                      describe(right));
  }
  r.a_hat = std::sqrt(a2);
  r.lambda = {r.u_hat - r.a_hat, r.u_hat, r.u_hat + r.a_hat};

  const double drho = right.rho - left.rho;
  const double du = right.u - left.u;
  const double dp = right.p - left.p;
  const double coupled = r.rho_hat * r.a_hat * du;
  r.wave_strengths = {(dp - coupled) / (2.0 * a2), drho - dp / a2, (dp + coupled) / (2.0 * a2)};
  return r;
}

/// Largest |eigenvalue| of the Roe matrix between two states.
inline double roe_max_speed(const PrimitiveState& left, const PrimitiveState& right,
                            const GasModel& gas) {
  if (left == right) return max_signal_speed(left, gas);
  const double sl = std::sqrt(left.rho);
  const double sr = std::sqrt(right.rho);
  const double inv = 1.0 / (sl + sr);
  const double u = (sl * left.u + sr * right.u) * inv;
  const double h = (sl * total_enthalpy(left, gas) + sr * total_enthalpy(right, gas)) * inv;
  const double a2 = (gas.gamma - 1.0) * (h - 0.5 * u * u);
  if (!(a2 > 0.0)) throw DomainError("Roe average has non-positive a^2");
  return std::abs(u) + std::sqrt(a2);
}

namespace detail {

inline FluxVector roe_flux(const PrimitiveState& left, const PrimitiveState& right,
                           const GasModel& gas, EntropyFix fix, const RoeAverages& r) {
  const FluxVector fl = physical_flux(left, gas);
  const FluxVector fr = physical_flux(right, gas);

  std::array<double, 3> speed{};
  const double delta = fix.delta_fraction * r.a_hat;
  for (int k = 0; k < 3; ++k) {
    const double lam = std::abs(r.lambda[k]);
    speed[k] = (fix.enabled && lam < delta) ? (lam * lam + delta * delta) / (2.0 * delta) : lam;
  }
  auto wave = [&](int k) {
    return (speed[k] * r.wave_strengths[k]) * r.eigenvector(k);
  };
  // Acoustic waves summed first so mirrored inputs give mirrored bits.
  const ConservativeState diss = (wave(0) + wave(2)) + wave(1);
  const FluxVector avg = fl + fr;
  return {0.5 * (avg.mass - diss.rho), 0.5 * (avg.momentum - diss.mom),
          0.5 * (avg.energy - diss.ener)};
}

}  // namespace detail

/// Roe's flux-difference form
///   F = (F_L + F_R)/2 - 1/2 sum_k |lambda_k| alpha_k r_k,
/// with |lambda_k| replaced by Harten's (lambda^2 + delta^2) / (2 delta) below
/// delta = delta_fraction * a_hat when the fix is enabled.
inline FluxVector roe_flux(const PrimitiveState& left, const PrimitiveState& right,
                           const GasModel& gas, EntropyFix fix = {}) {
  if (left == right) return physical_flux(left, gas);
  return detail::roe_flux(left, right, gas, fix, roe_averages(left, right, gas));
}

namespace detail {

inline ConservativeState roe_interface_state(const PrimitiveState& left,
                                             const PrimitiveState& right, const GasModel& gas,
                                             const RoeAverages& r) {
  const ConservativeState ul = prim_to_cons(left, gas);
  const ConservativeState ur = prim_to_cons(right, gas);
  auto wave = [&](int k) {
    const double sign = r.lambda[k] > 0.0 ? 1.0 : (r.lambda[k] < 0.0 ? -1.0 : 0.0);
    return (sign * r.wave_strengths[k]) * r.eigenvector(k);
  };
  // U_L + sum_{lambda<0} alpha r == U_R - sum_{lambda>0} alpha r; the
  // averaged form keeps mirrored inputs bitwise mirrored.
  return 0.5 * ((ul + ur) - ((wave(0) + wave(2)) + wave(1)));
}

inline FluxVector roe_sampled_flux(const PrimitiveState& left, const PrimitiveState& right,
                                   const GasModel& gas, const RoeAverages& r) {
  const ConservativeState star = roe_interface_state(left, right, gas, r);
  PrimitiveState q;
  try {
    q = cons_to_prim(star, gas);
  } catch (const DomainError&) {
    throw DomainError("Roe interface state is non-physical for " + describe(left) + " | " +
                      describe(right));
  }
  return physical_flux(q, gas);
}

}  // namespace detail

/// State of Roe's linearized Riemann solution on the interface (x/t = 0).
inline ConservativeState roe_interface_state(const PrimitiveState& left,
                                             const PrimitiveState& right, const GasModel& gas) {
  if (left == right) return prim_to_cons(left, gas);
  return detail::roe_interface_state(left, right, gas, roe_averages(left, right, gas));
}

/// Godunov flux built on Roe's linearized solver: the physical flux of the
/// linearized solution sampled on the interface.  Unlike roe_flux (the
/// flux of the linearized problem) this is nonlinear in the wave strengths,
/// and it carries the full post-shock density oscillation on the impact
/// problem where roe_flux damps most of it.
inline FluxVector roe_sampled_flux(const PrimitiveState& left, const PrimitiveState& right,
                                   const GasModel& gas) {
  if (left == right) return physical_flux(left, gas);
  return detail::roe_sampled_flux(left, right, gas, roe_averages(left, right, gas));
}

/// Interface flux used by the finite-volume update.
///   roe      physical flux of Roe's linearized solution at x/t = 0 (default)
///   roe_fds  Roe's flux-difference form, optionally with Harten's fix
///   exact    physical flux of the exact Riemann solution at x/t = 0
enum class FluxKind { roe, roe_fds, exact };

inline const char* to_string(FluxKind f) {
  switch (f) {
    case FluxKind::roe:
      return "roe";
    case FluxKind::roe_fds:
      return "roe-fds";
    default:
      return "exact";
  }
}

inline FluxVector interface_flux(FluxKind kind, const PrimitiveState& left,
                                 const PrimitiveState& right, const GasModel& gas,
                                 EntropyFix fix = {}) {
  switch (kind) {
    case FluxKind::roe:
      return roe_sampled_flux(left, right, gas);
    case FluxKind::roe_fds:
      return roe_flux(left, right, gas, fix);
    default:
      return exact_flux(left, right, gas);
  }
}

struct FluxAndSpeed {
  FluxVector flux;
  /// Largest |Roe eigenvalue| at the interface (roe_max_speed).
  double max_speed;
};

/// interface_flux together with roe_max_speed, sharing the Roe averages.
inline FluxAndSpeed interface_flux_and_speed(FluxKind kind, const PrimitiveState& left,
                                             const PrimitiveState& right, const GasModel& gas,
                                             EntropyFix fix = {}) {
  if (left == right) return {physical_flux(left, gas), max_signal_speed(left, gas)};
  const RoeAverages r = roe_averages(left, right, gas);
  const double speed = std::abs(r.u_hat) + r.a_hat;
  switch (kind) {
    case FluxKind::roe:
      return {detail::roe_sampled_flux(left, right, gas, r), speed};
    case FluxKind::roe_fds:
      return {detail::roe_flux(left, right, gas, fix, r), speed};
    default:
      return {exact_flux(left, right, gas), speed};
  }
}

}  // namespace impact
