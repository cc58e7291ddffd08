#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "upsbp/analysis.hpp"
#include "upsbp/timeint.hpp"

namespace upsbp {

// -- initial conditions and exact solutions -----------------------------------

double ic_advection_sine(double x);
double exact_advection_sine(double t, double x);

/// rho = h, v = 1, rho e = h^2 with h = 2 + 0.1 sin(pi (x - t)).
std::array<double, 3> ic_euler_manufactured(double t, double x);

/// Isentropic vortex on [-5, 5]^2: strength 10, background (rho, v, p) =
/// (1, (1, 1), 10).
std::array<double, 4> ic_isentropic_vortex(double x, double y, const GasModel& gas);

/// Background advection translates the vortex; periodic wrap on [-5, 5]^2.
std::array<double, 4> exact_isentropic_vortex(double t, double x, double y, const GasModel& gas);

/// Kelvin-Helmholtz shear layer on [-1, 1]^2 (smoothed step B).
std::array<double, 4> ic_khi(double x, double y, const GasModel& gas);

// -- convergence ---------------------------------------------------------------

enum class RefinementMode { dg, fd };

struct ConvergenceConfig {
  Equation equation = Equation::advection;  // advection or euler1d
  SplittingId splitting = SplittingId::lax_friedrichs;
  double lf_lambda = 1.0;
  int order = 2;
  RefinementMode mode = RefinementMode::dg;
  /// ladder of (elements, nodes per element); empty selects the standard
  /// ladder of the case. K = 1 with a derived-stencil order >= 3 runs a
  /// single periodic block of N nodes.
  std::vector<std::pair<int, int>> ladder;
  double abstol = 1e-8;
  double reltol = 1e-8;
  std::string table_path;  // bounded operator table for orders >= 3
};

struct ConvergenceRow {
  std::string case_name;
  std::string splitting;
  int order = 0;
  int elements = 0;
  int nodes = 0;
  long dofs = 0;
  double l2_error = 0.0;
  double eoc = 0.0;  // NaN in the first row
  bool crashed = false;
};

std::vector<ConvergenceRow> run_convergence(const ConvergenceConfig& cfg);

std::vector<std::pair<int, int>> default_ladder(Equation eq, int order, RefinementMode mode);

// -- robustness ----------------------------------------------------------------

struct KhiConfig {
  SplittingId splitting = SplittingId::van_leer_haenel;
  int order = 2;
  int elements_per_dir = 4;
  int nodes_per_dir = 16;
  bool single_block = false;  // purely periodic stencils, one block
  double t_end = 15.0;
  double abstol = 1e-6;
  double reltol = 1e-6;
  std::string table_path;
};

struct CrashRecord {
  std::string splitting;
  int order = 0;
  int elements = 0;  // per direction
  int nodes = 0;     // per direction
  double final_time = 0.0;
  bool crashed = false;
  double loc_x = 0.0;
  double loc_y = 0.0;
  std::string reason;
  long accepted_steps = 0;
  long rejected_steps = 0;
  /// distance of the crash location to the nearest element interface
  /// (reported, not asserted; meaningful for multi-element layouts)
  double interface_distance = 0.0;
};

CrashRecord run_khi(const KhiConfig& cfg);

struct VortexConfig {
  int order = 2;
  int nodes_per_dir = 64;
  int elements_per_dir = 1;
  bool single_block = true;
  double t_end = 10.0;
  int callback_every = 20;
  double abstol = 1e-6;
  double reltol = 1e-6;
};

struct VortexSample {
  double t = 0.0;
  double density_error = 0.0;
};

struct VortexResult {
  std::vector<VortexSample> series;
  double final_time = 0.0;
  std::optional<CrashEvent> crash;
};

VortexResult run_vortex(const VortexConfig& cfg);

// -- shared helpers ------------------------------------------------------------

/// Element operator for bounded multi-element layouts: built-ins for orders
/// 1-2, coefficient tables otherwise.
OperatorPair bounded_element_operator(int order, int nodes, const std::string& table_path);

/// Semidiscretization for a 2D Euler setup on [x0,x1]^2, either K^2 bounded
/// elements with SATs or one periodic block with derived stencils.
Semidiscretization make_euler2d_setup(int order, int elements_per_dir, int nodes_per_dir,
                                      bool single_block, double x0, double x1,
                                      SplittingId splitting, const std::string& table_path);

}  // namespace upsbp
