#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "upsbp/semidisc.hpp"

namespace upsbp {

enum class TimeScheme { rk4_fixed, ssp33_adaptive };

struct IntegratorConfig {
  TimeScheme scheme = TimeScheme::ssp33_adaptive;
  double dt = 0.0;  // fixed mode
  double abstol = 1e-6;
  double reltol = 1e-6;
  double t_start = 0.0;
  double t_end = 1.0;
  int callback_every = 0;  // sample every m accepted steps (0: start/end only)
  long max_steps = 100'000'000;
};

struct StepStats {
  long accepted = 0;
  long rejected = 0;
};

struct CrashEvent {
  double t = 0.0;
  std::ptrdiff_t element = -1;
  std::ptrdiff_t node = -1;
  double x = 0.0;
  double y = 0.0;
  std::string reason;  // "density" | "pressure" | "nan"
};

struct IntegrationResult {
  std::vector<double> state;
  double t_final = 0.0;
  std::optional<CrashEvent> crash;
  StepStats stats;
};

using RhsFn = std::function<void(double t, const double* u, double* dudt)>;
using SampleFn = std::function<void(double t, const std::vector<double>& u)>;

/// Drive a generic ODE right-hand side. Fixed mode: classical RK4. Adaptive
/// mode: four-stage third-order SSP scheme with an embedded second-order
/// error estimate and PI step size control (safety 0.9, factor clamp
/// [0.2, 5], mixed absolute/relative RMS error norm). Throws
/// IntegrationAbort on step size underflow, propagates rhs exceptions.
IntegrationResult integrate_ode(const RhsFn& rhs, std::vector<double> u0,
                                const IntegratorConfig& cfg, const SampleFn& sample = {});

/// Semidiscretization front end: converts AdmissibilityError from the rhs
/// and NaN states into a CrashEvent carrying time and location.
IntegrationResult integrate(const Semidiscretization& semi, std::vector<double> u0,
                            const IntegratorConfig& cfg, const SampleFn& sample = {});

/// Discrete functionals evaluated with the quadrature induced by M.
struct FunctionalSample {
  double t = 0.0;
  std::vector<double> mass;      // per conserved variable
  double energy = 0.0;           // ||u||_M^2 over all variables
  double kinetic_energy = 0.0;   // Euler only: sum M_i 1/2 rho |v|^2
};

FunctionalSample record_functionals(const Semidiscretization& semi, const std::vector<double>& u,
                                    double t);

}  // namespace upsbp
