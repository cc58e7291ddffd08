#include "upsbp/dense.hpp"

#include <algorithm>
#include <cmath>

namespace upsbp {

std::vector<double> symmetric_eigenvalues(const DenseMatrix& A) {
  const int n = A.n;
  DenseMatrix S(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = 0.5 * (A(i, j) + A(j, i));

  auto offdiag = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += S(i, j) * S(i, j);
    return s;
  };

  const double scale = std::max(S.max_abs(), 1e-300);
  const double tol = 1e-30 * scale * scale * n * n;

  for (int sweep = 0; sweep < 60; ++sweep) {
    if (offdiag() <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = S(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (S(q, q) - S(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double skp = S(k, p), skq = S(k, q);
          S(k, p) = c * skp - s * skq;
          S(k, q) = s * skp + c * skq;
        }
        for (int k = 0; k < n; ++k) {
          const double spk = S(p, k), sqk = S(q, k);
          S(p, k) = c * spk - s * sqk;
          S(q, k) = s * spk + c * sqk;
        }
      }
    }
  }
  if (offdiag() > tol * 1e6)
    throw EigensolverError("symmetric_eigenvalues: Jacobi sweeps did not converge");

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = S(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace upsbp
