#pragma once
// Reference computations written independently of the library, used to
// check it.  Nothing here calls into impact:: beyond plain state structs.

#include <array>
#include <cmath>
#include <stdexcept>

#include "impact/euler.hpp"

namespace oracle {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<Vec3, 3>;

struct TwoShock {
  double p_star;
  double rho_star;
  double shock_speed;
};

// Symmetric collision (rho, U, p) | (rho, -U, p): u* = 0 and both waves are
// shocks.  Squaring U = (p* - p) sqrt(A / (p* + B)) gives a quadratic in p*;
// the shock speed and post-shock density follow from the mass flux.
inline TwoShock symmetric_two_shock(double rho, double U, double p, double gamma) {
  const double A = 2.0 / ((gamma + 1.0) * rho);
  const double B = (gamma - 1.0) / (gamma + 1.0) * p;
  const double b = 2.0 * p + U * U / A;
  const double c = p * p - U * U * B / A;
  const double p_star = 0.5 * (b + std::sqrt(b * b - 4.0 * c));
  const double mass_flux = (p_star - p) / U;  // rho (S + U) = rho* S
  const double S = mass_flux / rho - U;
  return {p_star, mass_flux / S, S};
}

struct Star {
  double p;
  double u;
  double rho_left;
  double rho_right;
};

// Pressure function in mass-flux form: a shock contributes (p - pK) / W_K.
inline double side_function(double p, double rho, double pk, double gamma) {
  const double a = std::sqrt(gamma * pk / rho);
  if (p > pk) {
    const double w = std::sqrt(rho * (0.5 * (gamma + 1.0) * p + 0.5 * (gamma - 1.0) * pk));
    return (p - pk) / w;
  }
  return 2.0 * a / (gamma - 1.0) * (std::pow(p / pk, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
}

inline double side_density(double p, double rho, double pk, double gamma) {
  if (p > pk) {
    const double r = p / pk;
    return rho * ((gamma + 1.0) * r + (gamma - 1.0)) / ((gamma - 1.0) * r + (gamma + 1.0));
  }
  return rho * std::pow(p / pk, 1.0 / gamma);
}

// Plain bisection to roundoff; slow and simple on purpose.
inline Star bisection_star(const impact::PrimitiveState& l, const impact::PrimitiveState& r,
                           double gamma) {
  auto f = [&](double p) {
    return side_function(p, l.rho, l.p, gamma) + side_function(p, r.rho, r.p, gamma) + r.u - l.u;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (f(hi) < 0.0) hi *= 2.0;
  for (int i = 0; i < 2000 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double p = 0.5 * (lo + hi);
  const double u = 0.5 * (l.u + r.u) +
                   0.5 * (side_function(p, r.rho, r.p, gamma) - side_function(p, l.rho, l.p, gamma));
  return {p, u, side_density(p, l.rho, l.p, gamma), side_density(p, r.rho, r.p, gamma)};
}

inline Vec3 cons(const impact::PrimitiveState& q, double gamma) {
  return {q.rho, q.rho * q.u, q.p / (gamma - 1.0) + 0.5 * q.rho * q.u * q.u};
}

inline Vec3 flux(const impact::PrimitiveState& q, double gamma) {
  const double E = q.p / (gamma - 1.0) + 0.5 * q.rho * q.u * q.u;
  return {q.rho * q.u, q.rho * q.u * q.u + q.p, q.u * (E + q.p)};
}

inline Vec3 flux_of_cons(const Vec3& U, double gamma) {
  const double u = U[1] / U[0];
  const double p = (gamma - 1.0) * (U[2] - 0.5 * U[1] * u);
  return flux({U[0], u, p}, gamma);
}

inline double det(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

// Cramer's rule for a x = b.
inline Vec3 solve(const Mat3& a, const Vec3& b) {
  const double d = det(a);
  if (d == 0.0) throw std::runtime_error("singular matrix");
  Vec3 x{};
  for (int c = 0; c < 3; ++c) {
    Mat3 ac = a;
    for (int r = 0; r < 3; ++r) ac[r][c] = b[r];
    x[c] = det(ac) / d;
  }
  return x;
}

inline Vec3 mul(const Mat3& a, const Vec3& x) {
  Vec3 y{};
  for (int r = 0; r < 3; ++r) y[r] = a[r][0] * x[0] + a[r][1] * x[1] + a[r][2] * x[2];
  return y;
}

struct RoeMatrix {
  Mat3 jacobian;       // flux Jacobian at the averaged state
  Mat3 eigenvectors;   // columns r_k
  Vec3 eigenvalues;
};

inline RoeMatrix roe_matrix(const impact::PrimitiveState& l, const impact::PrimitiveState& r,
                            double gamma) {
  const double wl = std::sqrt(l.rho);
  const double wr = std::sqrt(r.rho);
  const double Hl = (cons(l, gamma)[2] + l.p) / l.rho;
  const double Hr = (cons(r, gamma)[2] + r.p) / r.rho;
  const double u = (wl * l.u + wr * r.u) / (wl + wr);
  const double H = (wl * Hl + wr * Hr) / (wl + wr);
  const double a = std::sqrt((gamma - 1.0) * (H - 0.5 * u * u));
  const double g1 = gamma - 1.0;
  RoeMatrix m{};
  m.jacobian = {Vec3{0.0, 1.0, 0.0},
                Vec3{0.5 * (gamma - 3.0) * u * u, (3.0 - gamma) * u, g1},
                Vec3{u * (0.5 * g1 * u * u - H), H - g1 * u * u, gamma * u}};
  m.eigenvalues = {u - a, u, u + a};
  const Vec3 r0{1.0, u - a, H - u * a};
  const Vec3 r1{1.0, u, 0.5 * u * u};
  const Vec3 r2{1.0, u + a, H + u * a};
  for (int k = 0; k < 3; ++k) {
    m.eigenvectors[k] = {r0[k], r1[k], r2[k]};
  }
  return m;
}

inline Vec3 column(const Mat3& a, int c) { return {a[0][c], a[1][c], a[2][c]}; }

// Roe's flux-difference form (F_L + F_R)/2 - R |Lambda| R^{-1} dU / 2.
inline Vec3 roe_fds_flux(const impact::PrimitiveState& l, const impact::PrimitiveState& r,
                         double gamma) {
  const RoeMatrix m = roe_matrix(l, r, gamma);
  const Vec3 ul = cons(l, gamma);
  const Vec3 ur = cons(r, gamma);
  const Vec3 alpha = solve(m.eigenvectors, {ur[0] - ul[0], ur[1] - ul[1], ur[2] - ul[2]});
  const Vec3 fl = flux(l, gamma);
  const Vec3 fr = flux(r, gamma);
  Vec3 out{};
  for (int i = 0; i < 3; ++i) {
    double diss = 0.0;
    for (int k = 0; k < 3; ++k) diss += std::abs(m.eigenvalues[k]) * alpha[k] * m.eigenvectors[i][k];
    out[i] = 0.5 * (fl[i] + fr[i]) - 0.5 * diss;
  }
  return out;
}

// Physical flux of the linearized solution at x/t = 0:
// U* = U_L + sum over left-going waves of alpha_k r_k.
inline Vec3 roe_sampled_flux(const impact::PrimitiveState& l, const impact::PrimitiveState& r,
                             double gamma) {
  const RoeMatrix m = roe_matrix(l, r, gamma);
  const Vec3 ul = cons(l, gamma);
  const Vec3 ur = cons(r, gamma);
  const Vec3 alpha = solve(m.eigenvectors, {ur[0] - ul[0], ur[1] - ul[1], ur[2] - ul[2]});
  Vec3 star = ul;
  for (int k = 0; k < 3; ++k) {
    if (m.eigenvalues[k] < 0.0) {
      for (int i = 0; i < 3; ++i) star[i] += alpha[k] * m.eigenvectors[i][k];
    }
  }
  return flux_of_cons(star, gamma);
}

}  // namespace oracle
