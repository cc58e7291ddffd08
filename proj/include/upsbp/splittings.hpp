#pragma once

#include <array>
#include <cmath>
#include <string>

#include "upsbp/common.hpp"
#include "upsbp/dual.hpp"

namespace upsbp {

enum class Equation { advection, burgers, euler1d, euler2d };

enum class SplittingId {
  central,          // f+ = f- = f/2; recovers the central scheme (D-+D+)/2
  upwind,           // f+ = f, f- = 0; valid for nonnegative wave speeds
  lax_friedrichs,   // f+- = (f +- lambda u)/2 with a global bound lambda
  burgers_llf,      // f+- = (u^2/2 +- |u| u)/2
  steger_warming,   // Euler, eigenvalue-split flux
  van_leer_haenel,  // Euler, Mach-polynomial split with pressure splitting
};

struct GasModel {
  double gamma = 1.4;
};

inline int n_vars(Equation eq) {
  switch (eq) {
    case Equation::advection:
    case Equation::burgers:
      return 1;
    case Equation::euler1d:
      return 3;
    case Equation::euler2d:
      return 4;
  }
  return 0;
}

std::string splitting_name(SplittingId id);
SplittingId splitting_from_name(const std::string& name);

namespace detail {

template <class Real>
inline void sonic_parts(const Real& lam, Real& plus, Real& minus) {
  const Real a = abs(lam);  // upsbp::abs handles double and Dual
  plus = Real(0.5) * (lam + a);
  minus = Real(0.5) * (lam - a);
}

}  // namespace detail

// -- physical fluxes ----------------------------------------------------------

template <class Real>
void advection_flux(const Real* u, Real* f) {
  f[0] = u[0];
}

template <class Real>
void burgers_flux(const Real* u, Real* f) {
  f[0] = Real(0.5) * u[0] * u[0];
}

/// Primitive quantities of a 1D Euler state (rho, rho v, rho e).
template <class Real>
struct EulerPrims1D {
  Real v, p, a, H;
};

template <class Real>
EulerPrims1D<Real> euler_prims_1d(const Real* u, const GasModel& gas) {
  EulerPrims1D<Real> pr;
  pr.v = u[1] / u[0];
  pr.p = (gas.gamma - 1.0) * (u[2] - Real(0.5) * u[1] * pr.v);
  pr.a = sqrt(gas.gamma * pr.p / u[0]);
  pr.H = (u[2] + pr.p) / u[0];
  return pr;
}

template <class Real>
void euler_flux_1d(const Real* u, const GasModel& gas, Real* f) {
  const auto pr = euler_prims_1d(u, gas);
  f[0] = u[1];
  f[1] = u[1] * pr.v + pr.p;
  f[2] = (u[2] + pr.p) * pr.v;
}

/// Primitive quantities of a 2D Euler state (rho, rho v1, rho v2, rho e).
template <class Real>
struct EulerPrims2D {
  Real v1, v2, p, a, H;
};

template <class Real>
EulerPrims2D<Real> euler_prims_2d(const Real* u, const GasModel& gas) {
  EulerPrims2D<Real> pr;
  pr.v1 = u[1] / u[0];
  pr.v2 = u[2] / u[0];
  pr.p = (gas.gamma - 1.0) * (u[3] - Real(0.5) * (u[1] * pr.v1 + u[2] * pr.v2));
  pr.a = sqrt(gas.gamma * pr.p / u[0]);
  pr.H = (u[3] + pr.p) / u[0];
  return pr;
}

/// Directional flux, dir = 0 for x, 1 for y.
template <class Real>
void euler_flux_2d(const Real* u, int dir, const GasModel& gas, Real* f) {
  const auto pr = euler_prims_2d(u, gas);
  const Real vn = dir == 0 ? pr.v1 : pr.v2;
  f[0] = u[0] * vn;
  f[1] = u[1] * vn;
  f[2] = u[2] * vn;
  f[1 + dir] += pr.p;
  f[3] = (u[3] + pr.p) * vn;
}

// -- splittings ---------------------------------------------------------------

template <class Real>
void lax_friedrichs_split(const Real* u, const Real* f, double lambda, int nv, Real* fp,
                          Real* fm) {
  for (int c = 0; c < nv; ++c) {
    fp[c] = Real(0.5) * (f[c] + lambda * u[c]);
    fm[c] = Real(0.5) * (f[c] - lambda * u[c]);
  }
}

template <class Real>
void burgers_llf_split(const Real* u, Real* fp, Real* fm) {
  const Real f = Real(0.5) * u[0] * u[0];
  const Real au = abs(u[0]) * u[0];
  fp[0] = Real(0.5) * (f + au);
  fm[0] = Real(0.5) * (f - au);
}

template <class Real>
void steger_warming_1d(const Real* u, const GasModel& gas, Real* fp, Real* fm) {
  const auto pr = euler_prims_1d(u, gas);
  const double g = gas.gamma;
  Real l1p, l1m, l2p, l2m, l3p, l3m;
  detail::sonic_parts(pr.v - pr.a, l1p, l1m);
  detail::sonic_parts(pr.v, l2p, l2m);
  detail::sonic_parts(pr.v + pr.a, l3p, l3m);
  const Real w = u[0] / (2.0 * g);
  // second row uses (v+a) with lambda_3, the standard Steger-Warming form
  fp[0] = w * (l1p + 2.0 * (g - 1.0) * l2p + l3p);
  fp[1] = w * ((pr.v - pr.a) * l1p + 2.0 * (g - 1.0) * pr.v * l2p + (pr.v + pr.a) * l3p);
  fp[2] = w * ((pr.H - pr.v * pr.a) * l1p + (g - 1.0) * pr.v * pr.v * l2p +
               (pr.H + pr.v * pr.a) * l3p);
  fm[0] = w * (l1m + 2.0 * (g - 1.0) * l2m + l3m);
  fm[1] = w * ((pr.v - pr.a) * l1m + 2.0 * (g - 1.0) * pr.v * l2m + (pr.v + pr.a) * l3m);
  fm[2] = w * ((pr.H - pr.v * pr.a) * l1m + (g - 1.0) * pr.v * pr.v * l2m +
               (pr.H + pr.v * pr.a) * l3m);
}

/// Subsonic branch of the van Leer-Hänel splitting; pure upwinding at
/// |M| >= 1 keeps the Jacobian eigenvalue signs for all Mach numbers.
template <class Real>
void van_leer_haenel_1d(const Real* u, const GasModel& gas, Real* fp, Real* fm) {
  const auto pr = euler_prims_1d(u, gas);
  const double g = gas.gamma;
  const Real M = pr.v / pr.a;
  if (value_of(M) >= 1.0) {
    euler_flux_1d(u, gas, fp);
    fm[0] = fm[1] = fm[2] = Real(0.0);
    return;
  }
  if (value_of(M) <= -1.0) {
    euler_flux_1d(u, gas, fm);
    fp[0] = fp[1] = fp[2] = Real(0.0);
    return;
  }
  const Real cp = u[0] * pr.a * (M + 1.0) * (M + 1.0) * Real(0.25);
  const Real cm = -u[0] * pr.a * (M - 1.0) * (M - 1.0) * Real(0.25);
  const Real pp = Real(0.5) * (1.0 + g * M) * pr.p;
  const Real pm = Real(0.5) * (1.0 - g * M) * pr.p;
  fp[0] = cp;
  fp[1] = cp * pr.v + pp;
  fp[2] = cp * pr.H;
  fm[0] = cm;
  fm[1] = cm * pr.v + pm;
  fm[2] = cm * pr.H;
}

template <class Real>
void steger_warming_2d(const Real* u, int dir, const GasModel& gas, Real* fp, Real* fm) {
  const auto pr = euler_prims_2d(u, gas);
  const double g = gas.gamma;
  const Real vn = dir == 0 ? pr.v1 : pr.v2;
  Real l1p, l1m, l2p, l2m, l3p, l3m;
  detail::sonic_parts(vn - pr.a, l1p, l1m);
  detail::sonic_parts(vn, l2p, l2m);
  detail::sonic_parts(vn + pr.a, l3p, l3m);
  const Real w = u[0] / (2.0 * g);
  const Real v2sum = pr.v1 * pr.v1 + pr.v2 * pr.v2;
  // the tangential momentum advects with the convective eigenvalue
  auto fill = [&](const Real& L1, const Real& L2, const Real& L3, Real* f) {
    const Real mass = w * (L1 + 2.0 * (g - 1.0) * L2 + L3);
    const Real mom_n = w * ((vn - pr.a) * L1 + 2.0 * (g - 1.0) * vn * L2 + (vn + pr.a) * L3);
    const Real vt = dir == 0 ? pr.v2 : pr.v1;
    f[0] = mass;
    f[1 + dir] = mom_n;
    f[2 - dir] = mass * vt;
    f[3] = w * ((pr.H - vn * pr.a) * L1 + (g - 1.0) * v2sum * L2 + (pr.H + vn * pr.a) * L3);
  };
  fill(l1p, l2p, l3p, fp);
  fill(l1m, l2m, l3m, fm);
}

template <class Real>
void van_leer_haenel_2d(const Real* u, int dir, const GasModel& gas, Real* fp, Real* fm) {
  const auto pr = euler_prims_2d(u, gas);
  const double g = gas.gamma;
  const Real vn = dir == 0 ? pr.v1 : pr.v2;
  const Real M = vn / pr.a;
  if (value_of(M) >= 1.0) {
    euler_flux_2d(u, dir, gas, fp);
    fm[0] = fm[1] = fm[2] = fm[3] = Real(0.0);
    return;
  }
  if (value_of(M) <= -1.0) {
    euler_flux_2d(u, dir, gas, fm);
    fp[0] = fp[1] = fp[2] = fp[3] = Real(0.0);
    return;
  }
  const Real cp = u[0] * pr.a * (M + 1.0) * (M + 1.0) * Real(0.25);
  const Real cm = -u[0] * pr.a * (M - 1.0) * (M - 1.0) * Real(0.25);
  const Real pp = Real(0.5) * (1.0 + g * M) * pr.p;
  const Real pm = Real(0.5) * (1.0 - g * M) * pr.p;
  fp[0] = cp;
  fp[1] = cp * pr.v1;
  fp[2] = cp * pr.v2;
  fp[3] = cp * pr.H;
  fm[0] = cm;
  fm[1] = cm * pr.v1;
  fm[2] = cm * pr.v2;
  fm[3] = cm * pr.H;
  fp[1 + dir] += pp;
  fm[1 + dir] += pm;
}

// -- generic dispatch ----------------------------------------------------------

/// Admissibility gate: density and pressure must be positive and finite.
/// Returns the failing quantity name or nullptr.
template <class Real>
const char* euler_admissibility_1d(const Real* u, const GasModel& gas) {
  const double rho = value_of(u[0]);
  if (std::isnan(rho) || std::isnan(value_of(u[1])) || std::isnan(value_of(u[2]))) return "nan";
  if (!(rho > 0.0)) return "density";
  const double v = value_of(u[1]) / rho;
  const double p = (gas.gamma - 1.0) * (value_of(u[2]) - 0.5 * value_of(u[1]) * v);
  if (std::isnan(p)) return "nan";
  if (!(p > 0.0)) return "pressure";
  return nullptr;
}

template <class Real>
const char* euler_admissibility_2d(const Real* u, const GasModel& gas) {
  const double rho = value_of(u[0]);
  for (int c = 0; c < 4; ++c)
    if (std::isnan(value_of(u[c]))) return "nan";
  if (!(rho > 0.0)) return "density";
  const double v1 = value_of(u[1]) / rho, v2 = value_of(u[2]) / rho;
  const double p =
      (gas.gamma - 1.0) * (value_of(u[3]) - 0.5 * (value_of(u[1]) * v1 + value_of(u[2]) * v2));
  if (std::isnan(p)) return "nan";
  if (!(p > 0.0)) return "pressure";
  return nullptr;
}

/// Evaluate the physical flux of any equation (1D equations: dir must be 0).
template <class Real>
void physical_flux(Equation eq, const Real* u, int dir, const GasModel& gas, Real* f) {
  switch (eq) {
    case Equation::advection:
      advection_flux(u, f);
      return;
    case Equation::burgers:
      burgers_flux(u, f);
      return;
    case Equation::euler1d:
      euler_flux_1d(u, gas, f);
      return;
    case Equation::euler2d:
      euler_flux_2d(u, dir, gas, f);
      return;
  }
}

/// Evaluate the chosen splitting at one nodal state. `lambda` only matters
/// for the Lax-Friedrichs splitting.
template <class Real>
void split_flux(Equation eq, SplittingId id, const Real* u, int dir, const GasModel& gas,
                double lambda, Real* fp, Real* fm) {
  const int nv = n_vars(eq);
  switch (id) {
    case SplittingId::central: {
      Real f[4];
      physical_flux(eq, u, dir, gas, f);
      for (int c = 0; c < nv; ++c) {
        fp[c] = Real(0.5) * f[c];
        fm[c] = Real(0.5) * f[c];
      }
      return;
    }
    case SplittingId::upwind: {
      physical_flux(eq, u, dir, gas, fp);
      for (int c = 0; c < nv; ++c) fm[c] = Real(0.0);
      return;
    }
    case SplittingId::lax_friedrichs: {
      Real f[4];
      physical_flux(eq, u, dir, gas, f);
      lax_friedrichs_split(u, f, lambda, nv, fp, fm);
      return;
    }
    case SplittingId::burgers_llf:
      if (eq != Equation::burgers)
        throw InvalidArgument("burgers_llf splitting needs Burgers' equation");
      burgers_llf_split(u, fp, fm);
      return;
    case SplittingId::steger_warming:
      if (eq == Equation::euler1d)
        steger_warming_1d(u, gas, fp, fm);
      else if (eq == Equation::euler2d)
        steger_warming_2d(u, dir, gas, fp, fm);
      else
        throw InvalidArgument("steger_warming splitting needs the Euler equations");
      return;
    case SplittingId::van_leer_haenel:
      if (eq == Equation::euler1d)
        van_leer_haenel_1d(u, gas, fp, fm);
      else if (eq == Equation::euler2d)
        van_leer_haenel_2d(u, dir, gas, fp, fm);
      else
        throw InvalidArgument("van_leer_haenel splitting needs the Euler equations");
      return;
  }
}

/// Largest local wave speed, used for diagnostics and time step estimates.
template <class Real>
double max_wave_speed(Equation eq, const Real* u, const GasModel& gas) {
  switch (eq) {
    case Equation::advection:
      return 1.0;
    case Equation::burgers:
      return std::abs(value_of(u[0]));
    case Equation::euler1d: {
      const double rho = value_of(u[0]);
      const double v = value_of(u[1]) / rho;
      const double p = (gas.gamma - 1.0) * (value_of(u[2]) - 0.5 * value_of(u[1]) * v);
      return std::abs(v) + std::sqrt(gas.gamma * p / rho);
    }
    case Equation::euler2d: {
      const double rho = value_of(u[0]);
      const double v1 = value_of(u[1]) / rho, v2 = value_of(u[2]) / rho;
      const double p = (gas.gamma - 1.0) *
                       (value_of(u[3]) - 0.5 * (value_of(u[1]) * v1 + value_of(u[2]) * v2));
      return std::max(std::abs(v1), std::abs(v2)) + std::sqrt(gas.gamma * p / rho);
    }
  }
  return 0.0;
}

}  // namespace upsbp
