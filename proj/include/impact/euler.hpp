#pragma once
//! \file euler.hpp
//! \brief Ideal-gas state algebra for the 1D Euler equations.
//!
//! States come in two flavours: primitive (rho, u, p) and conservative
//! (rho, rho*u, rho*E) with E = e + u^2/2 and e = p / (rho (gamma - 1)).

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace impact {

/// Raised when a state violates positivity of density or pressure.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GasModel {
  double gamma = 1.4;

  static GasModel make(double gamma) {
    if (!(gamma > 1.0) || !std::isfinite(gamma)) {
      throw DomainError("gamma must be > 1");
    }
    return GasModel{gamma};
  }
};

struct PrimitiveState {
  double rho = 1.0;
  double u = 0.0;
  double p = 1.0;

  [[nodiscard]] bool valid() const {
    return rho > 0.0 && p > 0.0 && std::isfinite(rho) && std::isfinite(u) &&
           std::isfinite(p);
  }
  friend bool operator==(const PrimitiveState&, const PrimitiveState&) = default;
};

struct ConservativeState {
  double rho = 1.0;
  double mom = 0.0;
  double ener = 1.0;

  ConservativeState& operator+=(const ConservativeState& o) {
    rho += o.rho;
    mom += o.mom;
    ener += o.ener;
    return *this;
  }
  ConservativeState& operator-=(const ConservativeState& o) {
    rho -= o.rho;
    mom -= o.mom;
    ener -= o.ener;
    return *this;
  }
  ConservativeState& operator*=(double s) {
    rho *= s;
    mom *= s;
    ener *= s;
    return *this;
  }
  friend ConservativeState operator+(ConservativeState a, const ConservativeState& b) {
    return a += b;
  }
  friend ConservativeState operator-(ConservativeState a, const ConservativeState& b) {
    return a -= b;
  }
  friend ConservativeState operator*(double s, ConservativeState a) { return a *= s; }
  friend bool operator==(const ConservativeState&, const ConservativeState&) = default;
};

struct FluxVector {
  double mass = 0.0;
  double momentum = 0.0;
  double energy = 0.0;

  [[nodiscard]] bool finite() const {
    return std::isfinite(mass) && std::isfinite(momentum) && std::isfinite(energy);
  }
  friend FluxVector operator+(const FluxVector& a, const FluxVector& b) {
    return {a.mass + b.mass, a.momentum + b.momentum, a.energy + b.energy};
  }
  friend FluxVector operator-(const FluxVector& a, const FluxVector& b) {
    return {a.mass - b.mass, a.momentum - b.momentum, a.energy - b.energy};
  }
  friend FluxVector operator*(double s, const FluxVector& a) {
    return {s * a.mass, s * a.momentum, s * a.energy};
  }
  friend bool operator==(const FluxVector&, const FluxVector&) = default;
};

inline std::string describe(const PrimitiveState& q) {
  std::ostringstream os;
  os.precision(17);
  os << "(rho=" << q.rho << ", u=" << q.u << ", p=" << q.p << ")";
  return os.str();
}

inline std::string describe(const ConservativeState& c) {
  std::ostringstream os;
  os.precision(17);
  os << "(rho=" << c.rho << ", mom=" << c.mom << ", ener=" << c.ener << ")";
  return os.str();
}

inline void require_valid(const PrimitiveState& q) {
  if (!q.valid()) {
    throw DomainError("non-physical primitive state " + describe(q));
  }
}

inline ConservativeState prim_to_cons(const PrimitiveState& q, const GasModel& gas) {
  require_valid(q);
  const double e = q.p / (q.rho * (gas.gamma - 1.0));
  return {q.rho, q.rho * q.u, q.rho * (e + 0.5 * q.u * q.u)};
}

inline PrimitiveState cons_to_prim(const ConservativeState& c, const GasModel& gas) {
  if (!(c.rho > 0.0) || !std::isfinite(c.rho)) {
    throw DomainError("non-positive density in " + describe(c));
  }
  const double u = c.mom / c.rho;
  const double p = (gas.gamma - 1.0) * (c.ener - 0.5 * c.mom * u);
  if (!(p > 0.0) || !std::isfinite(p) || !std::isfinite(u)) {
    throw DomainError("non-positive pressure in " + describe(c));
  }
  return {c.rho, u, p};
}

/// Total specific enthalpy H = (rho E + p) / rho.
inline double total_enthalpy(const PrimitiveState& q, const GasModel& gas) {
  return gas.gamma / (gas.gamma - 1.0) * q.p / q.rho + 0.5 * q.u * q.u;
}

inline FluxVector physical_flux(const PrimitiveState& q, const GasModel& gas) {
  require_valid(q);
  const double mass = q.rho * q.u;
  const double rho_e = q.p / (gas.gamma - 1.0) + 0.5 * mass * q.u;
  return {mass, mass * q.u + q.p, q.u * (rho_e + q.p)};
}

inline double sound_speed(const PrimitiveState& q, const GasModel& gas) {
  return std::sqrt(gas.gamma * q.p / q.rho);
}

inline double max_signal_speed(const PrimitiveState& q, const GasModel& gas) {
  return std::abs(q.u) + sound_speed(q, gas);
}

/// Mirror image under x -> -x.
inline PrimitiveState reflect(const PrimitiveState& q) { return {q.rho, -q.u, q.p}; }

}  // namespace impact
