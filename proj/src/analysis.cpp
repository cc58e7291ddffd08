#include "upsbp/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "upsbp/dual.hpp"
#include "upsbp/timeint.hpp"

namespace upsbp {

double JacobianMatrix::inf_norm() const {
  double mx = 0.0;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += std::abs((*this)(i, j));
    mx = std::max(mx, s);
  }
  return mx;
}

JacobianMatrix jacobian(const Semidiscretization& semi, const std::vector<double>& u,
                        JacobianMethod method, double t) {
  const std::size_t n = semi.dofs();
  if (u.size() != n) throw InvalidArgument("jacobian: state size mismatch");
  JacobianMatrix jac;
  jac.n = static_cast<int>(n);
  jac.a.assign(n * n, 0.0);
  jac.method = method;

  if (method == JacobianMethod::dual) {
    std::vector<Dual> ud(n), dud(n);
    for (std::size_t i = 0; i < n; ++i) ud[i] = Dual(u[i]);
    for (std::size_t j = 0; j < n; ++j) {
      ud[j].d = 1.0;
      try {
        semi.rhs(t, ud.data(), dud.data());
      } catch (AdmissibilityError& e) {
        e.node = static_cast<std::ptrdiff_t>(j);
        throw;
      }
      for (std::size_t i = 0; i < n; ++i) jac(static_cast<int>(i), static_cast<int>(j)) = dud[i].d;
      ud[j].d = 0.0;
    }
    return jac;
  }

  std::vector<double> up(u), um(u), fp(n), fm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(u[j]));
    up[j] = u[j] + h;
    um[j] = u[j] - h;
    semi.rhs(t, up.data(), fp.data());
    semi.rhs(t, um.data(), fm.data());
    for (std::size_t i = 0; i < n; ++i)
      jac(static_cast<int>(i), static_cast<int>(j)) = (fp[i] - fm[i]) / (2.0 * h);
    up[j] = u[j];
    um[j] = u[j];
  }
  return jac;
}

Spectrum spectrum(const DenseMatrix& a) {
  const int n = a.n;
  if (n > 4096) throw InvalidArgument("spectrum: dense eigensolve capped at 4096");
  if (n == 0) throw InvalidArgument("spectrum: empty matrix");
  for (double v : a.a)
    if (!std::isfinite(v)) throw InvalidArgument("spectrum: matrix has non-finite entries");

  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = a(i, j);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw EigensolverError("spectrum: QR iteration did not converge");

  Spectrum sp;
  sp.eigenvalues.resize(n);
  sp.max_real_part = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    sp.eigenvalues[i] = solver.eigenvalues()(i);
    sp.max_real_part = std::max(sp.max_real_part, sp.eigenvalues[i].real());
    sp.spectral_radius = std::max(sp.spectral_radius, std::abs(sp.eigenvalues[i]));
  }

  // spot-check residuals ||A v - lambda v|| <= 1e-8 ||A|| on sampled pairs
  const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  const int samples = std::min(n, 10);
  for (int s = 0; s < samples; ++s) {
    const int i = static_cast<int>((static_cast<long>(s) * n) / samples);
    const Eigen::VectorXcd v = solver.eigenvectors().col(i);
    const double resid = (m * v - solver.eigenvalues()(i) * v).norm() / v.norm();
    if (!(resid <= 1e-8 * std::max(norm, 1e-300)))
      throw EigensolverError("spectrum: eigenpair residual check failed");
  }
  return sp;
}

Spectrum spectrum(const JacobianMatrix& a) { return spectrum(a.dense()); }

namespace {

Semidiscretization burgers_semi_bounded(int order, int k, int n) {
  OperatorPair ref = order == 1 ? make_order1_bounded(n, 0.0, 1.0)
                                : make_order2_bounded(n, 0.0, 1.0);
  Semidiscretization semi;
  semi.layout = make_multielement_1d(ref, k, -1.0, 1.0);
  semi.equation = Equation::burgers;
  return semi;
}

Semidiscretization burgers_semi_periodic(int order, int total_nodes) {
  Semidiscretization semi;
  semi.layout = make_periodic_block_1d(derive_periodic_upwind(order, total_nodes, -1.0, 1.0));
  semi.equation = Equation::burgers;
  return semi;
}

}  // namespace

std::vector<StabilityRow> burgers_stability_table(const std::vector<int>& orders,
                                                  const std::vector<int>& element_counts,
                                                  const std::vector<int>& nodes_per_element,
                                                  std::uint64_t seed) {
  std::vector<StabilityRow> rows;
  for (int p : orders) {
    for (int k : element_counts) {
      for (int n : nodes_per_element) {
        Semidiscretization semi =
            p <= 2 ? burgers_semi_bounded(p, k, n) : burgers_semi_periodic(p, k * n);
        SplitMix64 rng(seed ^ (static_cast<std::uint64_t>(p) << 32) ^
                       (static_cast<std::uint64_t>(k) << 16) ^ static_cast<std::uint64_t>(n));
        std::vector<double> u(semi.dofs());
        for (double& v : u) v = rng.uniform();

        StabilityRow row;
        row.order = p;
        row.elements = k;
        row.nodes = n;

        semi.splitting = SplittingId::upwind;
        auto jac = jacobian(semi, u, JacobianMethod::dual);
        row.jac_norm_upwind = jac.inf_norm();
        row.max_real_upwind = spectrum(jac).max_real_part;

        semi.splitting = SplittingId::burgers_llf;
        jac = jacobian(semi, u, JacobianMethod::dual);
        row.jac_norm_llf = jac.inf_norm();
        row.max_real_llf = spectrum(jac).max_real_part;

        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<double> l2_error_per_var(const Semidiscretization& semi,
                                     const std::vector<double>& u, double t,
                                     const ExactFn& exact) {
  const int nv = semi.nvar();
  std::vector<double> acc(nv, 0.0);
  const int npe = semi.layout.nodes_per_element();
  double vals[4];
  for (int e = 0; e < semi.layout.elements(); ++e) {
    const int ex = e % semi.layout.kx, ey = e / semi.layout.kx;
    for (int node = 0; node < npe; ++node) {
      const int i = node % semi.layout.nx(), j = node / semi.layout.nx();
      exact(t, semi.layout.x_of(ex, i), semi.layout.y_of(ey, j), vals);
      const double w = semi.layout.weight(node);
      for (int c = 0; c < nv; ++c) {
        const double d = u[semi.index(e, node, c)] - vals[c];
        acc[c] += w * d * d;
      }
    }
  }
  const double vol = semi.layout.volume();
  for (double& a : acc) a = std::sqrt(a / vol);
  return acc;
}

double l2_error(const Semidiscretization& semi, const std::vector<double>& u, double t,
                const ExactFn& exact) {
  const auto per_var = l2_error_per_var(semi, u, t, exact);
  double s = 0.0;
  for (double e : per_var) s += e * e;
  return std::sqrt(s);
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) throw InvalidArgument("eoc: size mismatch");
  std::vector<double> out(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(errors[i - 1] > 0.0) || !(errors[i] > 0.0)) continue;
    out[i] = std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]);
  }
  return out;
}

}  // namespace upsbp
