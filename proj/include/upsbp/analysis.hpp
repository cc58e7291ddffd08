#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "upsbp/dense.hpp"
#include "upsbp/semidisc.hpp"

namespace upsbp {

enum class JacobianMethod { dual, central_fd };

struct JacobianMatrix {
  int n = 0;
  std::vector<double> a;  // row-major
  JacobianMethod method = JacobianMethod::dual;

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
  double inf_norm() const;
  DenseMatrix dense() const { return DenseMatrix(n, a); }
};

/// Column j = d(rhs)/du_j at the given state. Dual mode is exact to
/// roundoff; central differences use step 1e-6 * (1 + |u_j|).
JacobianMatrix jacobian(const Semidiscretization& semi, const std::vector<double>& u,
                        JacobianMethod method, double t = 0.0);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
  double spectral_radius = 0.0;
};

/// All eigenvalues of a dense real matrix (Hessenberg reduction + shifted QR
/// via Eigen). Eigenpair residuals are spot-checked; sizes above 4096 are
/// rejected.
Spectrum spectrum(const DenseMatrix& a);
Spectrum spectrum(const JacobianMatrix& a);

/// Deterministic generator for reproducible random states (splitmix64).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Seed for the random nonnegative states of the stability tables.
inline constexpr std::uint64_t kStabilitySeed = 20230811ULL;

struct StabilityRow {
  int order = 0;
  int elements = 0;
  int nodes = 0;
  double max_real_upwind = 0.0;
  double max_real_llf = 0.0;
  double jac_norm_upwind = 0.0;
  double jac_norm_llf = 0.0;
};

/// Burgers' equation at a seeded random nonnegative state: assemble the
/// fully-upwind and the locally split right-hand sides, take exact
/// Jacobians, and record the maximal real part of their spectra.
/// Orders 1-2 run K bounded elements with interface coupling; higher orders
/// use the derived periodic stencils on a single block with K*N nodes.
std::vector<StabilityRow> burgers_stability_table(const std::vector<int>& orders,
                                                  const std::vector<int>& element_counts,
                                                  const std::vector<int>& nodes_per_element,
                                                  std::uint64_t seed = kStabilitySeed);

/// Pointwise exact solution: fills nvar values at (t, x, y).
using ExactFn = std::function<void(double t, double x, double y, double* vals)>;

/// Discrete L2 error per variable, normalized by the domain volume:
/// sqrt( sum_i w_i (u_i - exact_i)^2 / |Omega| ).
std::vector<double> l2_error_per_var(const Semidiscretization& semi,
                                     const std::vector<double>& u, double t,
                                     const ExactFn& exact);

/// Euclidean combination of the per-variable errors.
double l2_error(const Semidiscretization& semi, const std::vector<double>& u, double t,
                const ExactFn& exact);

/// EOC_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); entry 0 is NaN. Nonpositive
/// errors yield NaN markers.
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h);

}  // namespace upsbp
