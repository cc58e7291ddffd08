#include "upsbp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "upsbp/dense.hpp"

namespace upsbp {

namespace {

constexpr double kSbpTol = 1e-13;
constexpr double kSymmetryTol = 1e-13;
constexpr double kNsdTol = 1e-12;
constexpr double kConsistencyTol = 1e-12;
constexpr double kAccuracyTol = 1e-10;

int wrap_index(int i, int n) { return ((i % n) + n) % n; }

StencilMatrix mirror(const StencilMatrix& d, int n) {
  std::vector<Triplet> t;
  d.for_each([&](int r, int c, double v) { t.push_back({n - 1 - r, n - 1 - c, -v}); });
  return StencilMatrix::from_triplets(n, std::move(t));
}

StencilMatrix circulant(int n, const std::vector<int>& offsets,
                        const std::vector<double>& weights, double dx) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(n) * offsets.size());
  for (int i = 0; i < n; ++i)
    for (std::size_t k = 0; k < offsets.size(); ++k)
      t.push_back({i, wrap_index(i + offsets[k], n), weights[k] / dx});
  return StencilMatrix::from_triplets(n, std::move(t));
}

/// Sparse accumulation of M D+ + D-^T M (minus boundary terms for bounded
/// pairs) and of the dissipation matrix M (D+ - D-).
using SparseMap = std::map<std::pair<int, int>, double>;

SparseMap sbp_residual_entries(const OperatorPair& op) {
  SparseMap m;
  op.dplus.for_each([&](int r, int c, double v) { m[{r, c}] += op.mass[r] * v; });
  op.dminus.for_each([&](int r, int c, double v) { m[{c, r}] += op.mass[r] * v; });
  if (!op.periodic) {
    const int n = op.size();
    m[{0, 0}] += 1.0;
    m[{n - 1, n - 1}] -= 1.0;
  }
  return m;
}

SparseMap dissipation_entries(const OperatorPair& op) {
  SparseMap m;
  op.dplus.for_each([&](int r, int c, double v) { m[{r, c}] += op.mass[r] * v; });
  op.dminus.for_each([&](int r, int c, double v) { m[{r, c}] -= op.mass[r] * v; });
  return m;
}

double inf_norm(const SparseMap& m, int n) {
  std::vector<double> row(n, 0.0);
  for (const auto& [ij, v] : m) row[ij.first] += std::abs(v);
  double mx = 0.0;
  for (double r : row) mx = std::max(mx, r);
  return mx;
}

double max_asymmetry(const SparseMap& m) {
  double mx = 0.0;
  for (const auto& [ij, v] : m) {
    auto it = m.find({ij.second, ij.first});
    const double vt = it == m.end() ? 0.0 : it->second;
    mx = std::max(mx, std::abs(v - vt));
  }
  return mx;
}

double scaled_mass_inf_norm(const OperatorPair& op) {
  SparseMap m;
  op.dplus.for_each([&](int r, int c, double v) { m[{r, c}] += op.mass[r] * v; });
  return inf_norm(m, op.size());
}

/// Rows whose stencil wraps around the periodic seam; monomials are not
/// periodic, so these rows are excluded from the accuracy checks.
std::vector<std::uint8_t> wrapping_rows(const OperatorPair& op) {
  const int n = op.size();
  std::vector<std::uint8_t> w(n, 0);
  if (!op.periodic) return w;
  for (int i = 0; i < n; ++i) {
    auto [lo_p, hi_p] = op.dplus.row_extent(i);
    auto [lo_m, hi_m] = op.dminus.row_extent(i);
    if (hi_p - lo_p > n / 2 || hi_m - lo_m > n / 2) w[i] = 1;
  }
  return w;
}

/// Largest k <= cap such that row i of D reproduces d/dx x^j for all j <= k.
std::vector<int> row_orders(const StencilMatrix& d, const Grid1D& grid, int cap) {
  const int n = grid.size();
  const double dx = grid.min_spacing();
  std::vector<int> ord(n, cap);
  std::vector<double> p(n), dp(n), out(n);
  for (int k = 0; k <= cap; ++k) {
    double scale = 1.0;
    for (int i = 0; i < n; ++i) {
      p[i] = std::pow(grid.nodes[i], k);
      dp[i] = k == 0 ? 0.0 : k * std::pow(grid.nodes[i], k - 1);
      scale = std::max(scale, std::abs(dp[i]));
    }
    d.apply(p.data(), 1, out.data(), 1, 1.0, false);
    const double tol = kAccuracyTol / dx * scale;
    for (int i = 0; i < n; ++i)
      if (std::abs(out[i] - dp[i]) > tol) ord[i] = std::min(ord[i], k - 1);
  }
  return ord;
}

DenseMatrix dense_from_map(const SparseMap& m, int n) {
  DenseMatrix a(n);
  for (const auto& [ij, v] : m) a(ij.first, ij.second) = v;
  return a;
}

double max_eig_of_map(const SparseMap& m, const OperatorPair& op) {
  const int n = op.size();
  if (op.circulant) {
    // symmetric circulant: eigenvalues are the symbol sampled at 2*pi*k/n
    std::vector<std::pair<int, double>> row0;
    for (const auto& [ij, v] : m)
      if (ij.first == 0) row0.emplace_back(ij.second, v);
    double mx = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < n; ++k) {
      double lam = 0.0;
      for (const auto& [c, v] : row0) lam += v * std::cos(2.0 * M_PI * k * c / n);
      mx = std::max(mx, lam);
    }
    return mx;
  }
  if (n <= 900) {
    const auto ev = symmetric_eigenvalues(dense_from_map(m, n));
    return ev.back();
  }
  // large bounded pair: power iteration on the shifted symmetrized matrix
  std::vector<std::pair<std::pair<int, int>, double>> sym;
  for (const auto& [ij, v] : m) {
    auto it = m.find({ij.second, ij.first});
    sym.push_back({ij, 0.5 * (v + (it == m.end() ? 0.0 : it->second))});
  }
  const double sigma = inf_norm(m, n);
  std::vector<double> z(n, 1.0), w(n);
  double rq = 0.0;
  for (int it = 0; it < 4000; ++it) {
    std::fill(w.begin(), w.end(), 0.0);
    for (const auto& [ij, v] : sym) w[ij.first] += v * z[ij.second];
    for (int i = 0; i < n; ++i) w[i] += sigma * z[i];
    double nrm = 0.0, dot = 0.0;
    for (int i = 0; i < n; ++i) {
      nrm += w[i] * w[i];
      dot += w[i] * z[i];
    }
    nrm = std::sqrt(nrm);
    rq = dot;  // z normalized, so z^T (S+sigma) z
    if (nrm == 0.0) return -sigma;
    for (int i = 0; i < n; ++i) z[i] = w[i] / nrm;
  }
  return rq - sigma;
}

}  // namespace

CentralDecomposition central_decomposition(const OperatorPair& op) {
  const int n = op.size();
  std::vector<Triplet> c, d;
  op.dplus.for_each([&](int r, int cc, double v) {
    c.push_back({r, cc, 0.5 * v});
    d.push_back({r, cc, 0.5 * v});
  });
  op.dminus.for_each([&](int r, int cc, double v) {
    c.push_back({r, cc, 0.5 * v});
    d.push_back({r, cc, -0.5 * v});
  });
  return {StencilMatrix::from_triplets(n, std::move(c)),
          StencilMatrix::from_triplets(n, std::move(d))};
}

OperatorPair make_order1_bounded(int n_nodes, double xmin, double xmax) {
  if (n_nodes < 3) throw InvalidArgument("make_order1_bounded: need at least 3 nodes");
  OperatorPair op;
  op.grid = Grid1D::uniform_bounded(n_nodes, xmin, xmax);
  const double dx = op.grid.min_spacing();
  const int n = n_nodes;

  std::vector<Triplet> tp;
  tp.push_back({0, 0, -2.0 / dx});
  tp.push_back({0, 1, 2.0 / dx});
  for (int i = 1; i < n - 1; ++i) {
    tp.push_back({i, i, -1.0 / dx});
    tp.push_back({i, i + 1, 1.0 / dx});
  }
  op.dplus = StencilMatrix::from_triplets(n, std::move(tp));
  op.dminus = mirror(op.dplus, n);

  op.mass.assign(n, dx);
  op.mass.front() = op.mass.back() = 0.5 * dx;
  op.interior_order = 1;
  op.interior_row.assign(n, 1);
  op.interior_row.front() = op.interior_row.back() = 0;
  return op;
}

OperatorPair make_order2_bounded(int n_nodes, double xmin, double xmax) {
  if (n_nodes < 6) throw InvalidArgument("make_order2_bounded: need at least 6 nodes");
  OperatorPair op;
  op.grid = Grid1D::uniform_bounded(n_nodes, xmin, xmax);
  const double dx = op.grid.min_spacing();
  const int n = n_nodes;

  std::vector<Triplet> tp;
  const double c0[] = {-3.0, 5.0, -2.0};
  const double c1[] = {-1.0 / 5.0, -1.0, 8.0 / 5.0, -2.0 / 5.0};
  for (int j = 0; j < 3; ++j) tp.push_back({0, j, c0[j] / dx});
  for (int j = 0; j < 4; ++j) tp.push_back({1, j, c1[j] / dx});
  for (int i = 2; i < n - 2; ++i) {
    tp.push_back({i, i, -1.5 / dx});
    tp.push_back({i, i + 1, 2.0 / dx});
    tp.push_back({i, i + 2, -0.5 / dx});
  }
  tp.push_back({n - 2, n - 2, -1.0 / dx});
  tp.push_back({n - 2, n - 1, 1.0 / dx});
  tp.push_back({n - 1, n - 2, -1.0 / dx});
  tp.push_back({n - 1, n - 1, 1.0 / dx});
  op.dplus = StencilMatrix::from_triplets(n, std::move(tp));
  op.dminus = mirror(op.dplus, n);

  op.mass.assign(n, dx);
  op.mass[0] = op.mass[n - 1] = dx / 4.0;
  op.mass[1] = op.mass[n - 2] = 5.0 * dx / 4.0;
  op.interior_order = 2;
  op.interior_row.assign(n, 1);
  op.interior_row[0] = op.interior_row[1] = 0;
  op.interior_row[n - 2] = op.interior_row[n - 1] = 0;
  return op;
}

OperatorPair make_order2_periodic(int n_nodes, double xmin, double xmax) {
  if (n_nodes < 5) throw InvalidArgument("make_order2_periodic: need at least 5 nodes");
  OperatorPair op;
  op.grid = Grid1D::uniform_periodic(n_nodes, xmin, xmax);
  const double dx = (xmax - xmin) / n_nodes;
  op.dplus = circulant(n_nodes, {0, 1, 2}, {-1.5, 2.0, -0.5}, dx);
  op.dminus = circulant(n_nodes, {-2, -1, 0}, {0.5, -2.0, 1.5}, dx);
  op.mass.assign(n_nodes, dx);
  op.periodic = true;
  op.circulant = true;
  op.interior_order = 2;
  op.interior_row.assign(n_nodes, 1);
  return op;
}

RationalStencil derive_periodic_stencil(int order) {
  if (order < 1 || order > 12)
    throw InvalidArgument("derive_periodic_stencil: order must be in 1..12");
  const int q = order;
  const int lo = -((q - 1) / 2);
  const int m = q + 1;

  RationalStencil st;
  st.order = q;
  st.offsets.resize(m);
  for (int j = 0; j < m; ++j) st.offsets[j] = lo + j;

  // moment system: sum_j c_j off_j^k = delta_{k,1}, solved exactly
  std::vector<std::vector<Rational>> A(m, std::vector<Rational>(m + 1));
  for (int k = 0; k < m; ++k) {
    for (int j = 0; j < m; ++j) {
      Rational p{1};
      for (int e = 0; e < k; ++e) p = p * Rational{st.offsets[j]};
      A[k][j] = p;
    }
    A[k][m] = Rational{k == 1 ? 1 : 0};
  }
  for (int col = 0; col < m; ++col) {
    int piv = -1;
    for (int r = col; r < m; ++r)
      if (!A[r][col].zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw InvalidArgument("derive_periodic_stencil: singular moment system");
    std::swap(A[col], A[piv]);
    for (int r = 0; r < m; ++r) {
      if (r == col || A[r][col].zero()) continue;
      const Rational f = A[r][col] / A[col][col];
      for (int c = col; c <= m; ++c) A[r][c] = A[r][c] - f * A[col][c];
    }
  }
  st.weights.resize(m);
  for (int j = 0; j < m; ++j) st.weights[j] = A[j][m] / A[j][j];
  return st;
}

OperatorPair derive_periodic_upwind(int order, int n_nodes, double xmin, double xmax) {
  const auto st = derive_periodic_stencil(order);
  if (n_nodes <= order + 2)
    throw InvalidArgument("derive_periodic_upwind: need more than order+2 nodes");

  OperatorPair op;
  op.grid = Grid1D::uniform_periodic(n_nodes, xmin, xmax);
  const double dx = (xmax - xmin) / n_nodes;

  const int m = static_cast<int>(st.offsets.size());
  std::vector<double> wp(m), wm(m);
  std::vector<int> offm(m);
  for (int j = 0; j < m; ++j) wp[j] = st.weights[j].value();
  for (int j = 0; j < m; ++j) {
    offm[j] = -st.offsets[m - 1 - j];
    wm[j] = -wp[m - 1 - j];
  }
  op.dplus = circulant(n_nodes, st.offsets, wp, dx);
  op.dminus = circulant(n_nodes, offm, wm, dx);
  op.mass.assign(n_nodes, dx);
  op.periodic = true;
  op.circulant = true;
  op.interior_order = order;
  op.interior_row.assign(n_nodes, 1);

  const auto diss = dissipation_entries(op);
  const double scale = std::max(inf_norm(diss, n_nodes), 1e-300);
  const double max_eig = max_eig_of_map(diss, op);
  if (max_eig > kNsdTol * scale) {
    std::ostringstream os;
    os << "derive_periodic_upwind: order " << order
       << " stencil violates negative semidefiniteness, max eigenvalue " << max_eig;
    throw DerivationError(max_eig, os.str());
  }
  return op;
}

OperatorPair make_dgsem_p2(double xmin, double xmax) {
  if (!(xmax > xmin)) throw InvalidArgument("make_dgsem_p2: xmax <= xmin");
  OperatorPair op;
  const double len = xmax - xmin;
  op.grid = Grid1D{xmin, xmax, {xmin, 0.5 * (xmin + xmax), xmax}};
  const double d[3][3] = {{-3, 4, -1}, {-1, 0, 1}, {1, -4, 3}};
  std::vector<Triplet> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (d[i][j] != 0.0) t.push_back({i, j, d[i][j] / len});
  op.dplus = StencilMatrix::from_triplets(3, t);
  op.dminus = op.dplus;
  op.mass = {len / 6.0, 2.0 * len / 3.0, len / 6.0};
  op.interior_order = 2;
  op.interior_row.assign(3, 1);
  return op;
}

OperatorPair couple(const OperatorPair& left, const OperatorPair& right) {
  if (left.periodic || right.periodic)
    throw InvalidArgument("couple: both operators must be bounded");
  const double xi_l = left.grid.nodes.back();
  const double xi_r = right.grid.nodes.front();
  if (std::abs(xi_l - xi_r) > 1e-12 * std::max(1.0, std::abs(xi_l)))
    throw InvalidArgument("couple: interface coordinates do not match");

  const int nl = left.size(), nr = right.size(), n = nl + nr;
  OperatorPair op;
  op.grid.xmin = left.grid.xmin;
  op.grid.xmax = right.grid.xmax;
  op.grid.nodes = left.grid.nodes;
  op.grid.nodes.insert(op.grid.nodes.end(), right.grid.nodes.begin(), right.grid.nodes.end());
  op.mass = left.mass;
  op.mass.insert(op.mass.end(), right.mass.begin(), right.mass.end());

  std::vector<Triplet> tp, tm;
  left.dplus.for_each([&](int r, int c, double v) { tp.push_back({r, c, v}); });
  right.dplus.for_each([&](int r, int c, double v) { tp.push_back({r + nl, c + nl, v}); });
  left.dminus.for_each([&](int r, int c, double v) { tm.push_back({r, c, v}); });
  right.dminus.for_each([&](int r, int c, double v) { tm.push_back({r + nl, c + nl, v}); });
  const double wl = 1.0 / left.mass.back();
  const double wr = 1.0 / right.mass.front();
  tp.push_back({nl - 1, nl - 1, -wl});
  tp.push_back({nl - 1, nl, wl});
  tm.push_back({nl, nl - 1, -wr});
  tm.push_back({nl, nl, wr});
  op.dplus = StencilMatrix::from_triplets(n, std::move(tp));
  op.dminus = StencilMatrix::from_triplets(n, std::move(tm));

  op.interior_order = std::min(left.interior_order, right.interior_order);
  op.interior_row = left.interior_row;
  op.interior_row.insert(op.interior_row.end(), right.interior_row.begin(),
                         right.interior_row.end());
  // seam rows pick up penalty entries; they no longer carry the interior order
  op.interior_row[nl - 1] = 0;
  op.interior_row[nl] = 0;
  return op;
}

OperatorPair couple_periodic(const std::vector<OperatorPair>& blocks) {
  if (blocks.empty()) throw InvalidArgument("couple_periodic: no blocks");
  OperatorPair chain = blocks.front();
  if (chain.periodic) throw InvalidArgument("couple_periodic: blocks must be bounded");
  for (std::size_t k = 1; k < blocks.size(); ++k) chain = couple(chain, blocks[k]);

  const int n = chain.size();
  auto tp = chain.dplus.triplets();
  auto tm = chain.dminus.triplets();
  const double wl = 1.0 / chain.mass.back();
  const double wr = 1.0 / chain.mass.front();
  tp.push_back({n - 1, n - 1, -wl});
  tp.push_back({n - 1, 0, wl});
  tm.push_back({0, n - 1, -wr});
  tm.push_back({0, 0, wr});
  chain.dplus = StencilMatrix::from_triplets(n, std::move(tp));
  chain.dminus = StencilMatrix::from_triplets(n, std::move(tm));
  chain.periodic = true;
  chain.interior_row.front() = 0;
  chain.interior_row.back() = 0;
  return chain;
}

// -- verification -------------------------------------------------------------

const CheckResult* OperatorReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const CheckResult* OperatorReport::first_failure() const {
  for (const auto& c : checks)
    if (!c.pass) return &c;
  return nullptr;
}

std::string OperatorReport::summary() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", c.value);
    os << (c.pass ? "pass" : "FAIL") << "  " << c.name << " = " << buf;
    std::snprintf(buf, sizeof buf, "%.3e", c.threshold);
    os << " (threshold " << buf << ")\n";
  }
  os << "interior order measured: " << interior_order_measured
     << ", boundary order measured: " << boundary_order_measured << "\n";
  return os.str();
}

double dissipation_max_eigenvalue(const OperatorPair& op) {
  return max_eig_of_map(dissipation_entries(op), op);
}

std::vector<std::uint8_t> infer_interior_rows(const OperatorPair& op) {
  const auto wrap = wrapping_rows(op);
  const auto ord_p = row_orders(op.dplus, op.grid, op.interior_order);
  const auto ord_m = row_orders(op.dminus, op.grid, op.interior_order);
  std::vector<std::uint8_t> mask(op.size(), 0);
  for (int i = 0; i < op.size(); ++i)
    mask[i] =
        (wrap[i] || (ord_p[i] >= op.interior_order && ord_m[i] >= op.interior_order)) ? 1 : 0;
  return mask;
}

OperatorReport verify(const OperatorPair& op) {
  OperatorReport rep;
  const int n = op.size();
  const double dx = op.grid.min_spacing();
  auto add = [&rep](std::string name, double value, double threshold) {
    rep.checks.push_back({std::move(name), value, threshold, value <= threshold});
  };

  double min_mass = std::numeric_limits<double>::infinity();
  double sum_mass = 0.0;
  for (double m : op.mass) {
    min_mass = std::min(min_mass, m);
    sum_mass += m;
  }
  rep.checks.push_back({"mass_positive", min_mass, 0.0, min_mass > 0.0});
  add("mass_quadrature", std::abs(sum_mass - op.grid.length()) / op.grid.length(), kSbpTol);

  const double md_scale = std::max(scaled_mass_inf_norm(op), 1e-300);
  add("sbp_residual", inf_norm(sbp_residual_entries(op), n) / md_scale, kSbpTol);

  const auto diss = dissipation_entries(op);
  const double diss_scale = std::max(inf_norm(diss, n), 1e-300);
  add("dissipation_symmetry", max_asymmetry(diss) / diss_scale, kSymmetryTol);
  add("nsd_max_eigenvalue", max_eig_of_map(diss, op) / diss_scale, kNsdTol);

  std::vector<double> ones(n, 1.0), out(n);
  double cons = 0.0;
  op.dplus.apply(ones.data(), 1, out.data(), 1, 1.0, false);
  for (double v : out) cons = std::max(cons, std::abs(v));
  op.dminus.apply(ones.data(), 1, out.data(), 1, 1.0, false);
  for (double v : out) cons = std::max(cons, std::abs(v));
  add("consistency", cons, kConsistencyTol / dx);

  // monomial accuracy on rows carrying the interior order (wrap rows of
  // periodic operators excluded, since monomials are not periodic)
  const auto wrap = wrapping_rows(op);
  const int cap = op.interior_order;
  const auto ord_p = row_orders(op.dplus, op.grid, cap);
  const auto ord_m = row_orders(op.dminus, op.grid, cap);
  int interior_measured = cap, boundary_measured = cap;
  bool any_eligible = false;
  bool acc_ok = true;
  for (int i = 0; i < n; ++i) {
    if (wrap[i]) continue;
    const int o = std::min(ord_p[i], ord_m[i]);
    boundary_measured = std::min(boundary_measured, o);
    if (op.interior_row.at(i)) {
      any_eligible = true;
      interior_measured = std::min(interior_measured, o);
      if (o < cap) acc_ok = false;
    }
  }
  // value = measured interior order; passes when it reaches the declared one
  rep.checks.push_back({"accuracy", static_cast<double>(any_eligible ? interior_measured : cap),
                        static_cast<double>(cap), acc_ok});
  rep.interior_order_measured = any_eligible ? interior_measured : cap;
  rep.boundary_order_measured = boundary_measured;

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

void expect_valid(const OperatorPair& op) {
  const auto rep = verify(op);
  if (const auto* f = rep.first_failure()) {
    std::ostringstream os;
    os << "operator verification failed: " << f->name << " = " << f->value << " (threshold "
       << f->threshold << ")";
    throw VerificationError(f->name, os.str());
  }
}

}  // namespace upsbp
