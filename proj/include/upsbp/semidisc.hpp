#pragma once

#include <array>
#include <functional>
#include <vector>

#include "upsbp/mesh.hpp"
#include "upsbp/splittings.hpp"

namespace upsbp {

struct BoundaryCondition {
  enum class Kind { periodic, advection_inflow };
  Kind kind = Kind::periodic;
  std::function<double(double)> inflow;  // g_L(t), advection only
};

enum class SourceTerm { none, euler_manufactured };

/// Method-of-lines right-hand side du/dt = -D+ f^-(u) - D- f^+(u) (+SATs,
/// +source). Evaluation is deterministic and never mutates the input state.
class Semidiscretization {
 public:
  MeshLayout layout;
  Equation equation = Equation::advection;
  SplittingId splitting = SplittingId::upwind;
  double lf_lambda = 1.0;
  GasModel gas;
  BoundaryCondition boundary;
  SourceTerm source = SourceTerm::none;

  int nvar() const { return n_vars(equation); }
  std::size_t dofs() const { return static_cast<std::size_t>(layout.total_nodes()) * nvar(); }

  std::size_t index(int element, int node, int var) const {
    return (static_cast<std::size_t>(element) * layout.nodes_per_element() + node) *
               static_cast<std::size_t>(nvar()) +
           var;
  }

  /// Throws AdmissibilityError annotated with (element, node, x, y) when a
  /// nodal state leaves the admissible set.
  template <class Real>
  void rhs(double t, const Real* u, Real* dudt) const;

  void rhs(double t, const std::vector<double>& u, std::vector<double>& dudt) const {
    dudt.resize(u.size());
    rhs(t, u.data(), dudt.data());
  }

  /// Fill a state field from a pointwise initial condition (vals has nvar
  /// entries per node).
  void project(const std::function<void(double x, double y, double* vals)>& ic,
               std::vector<double>& u) const;
};

/// Analytic source for the forced manufactured Euler solution
/// rho = h, v = 1, rho e = h^2 with h = 2 + 0.1 sin(pi (x - t)).
std::array<double, 3> manufactured_source_euler(double t, double x, const GasModel& gas);
std::array<double, 3> manufactured_state_euler(double t, double x);

}  // namespace upsbp
