#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "upsbp/operators.hpp"

using namespace upsbp;

namespace {

Eigen::MatrixXd to_eigen(const StencilMatrix& m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.size(), m.size());
  m.for_each([&](int i, int j, double v) { a(i, j) = v; });
  return a;
}

Eigen::MatrixXd mass_matrix(const OperatorPair& op) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(op.size(), op.size());
  for (int i = 0; i < op.size(); ++i) m(i, i) = op.mass[i];
  return m;
}

/// Brute-force symmetric eigensolve, independent of the library's Jacobi path.
Eigen::VectorXd dissipation_eigenvalues(const OperatorPair& op) {
  const Eigen::MatrixXd s = mass_matrix(op) * (to_eigen(op.dplus) - to_eigen(op.dminus));
  const Eigen::MatrixXd sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues();
}

Eigen::MatrixXd sbp_form(const OperatorPair& op) {
  return mass_matrix(op) * to_eigen(op.dplus) + to_eigen(op.dminus).transpose() * mass_matrix(op);
}

}  // namespace

TEST_CASE("order-1 bounded pair matches the explicit matrices") {
  const auto op = make_order1_bounded(3, 0.0, 1.0);
  CHECK(op.dx() == doctest::Approx(0.5));
  CHECK(op.dplus.coeff(0, 0) == doctest::Approx(-2.0 / 0.5));
  CHECK(op.dplus.coeff(0, 1) == doctest::Approx(2.0 / 0.5));
  CHECK(op.dplus.coeff(0, 2) == 0.0);
  CHECK(op.dplus.coeff(2, 0) == 0.0);
  CHECK(op.dplus.coeff(2, 2) == 0.0);

  // M = dx diag(1/2, 1, ..., 1, 1/2)
  const auto op10 = make_order1_bounded(10, 0.0, 1.0);
  const double dx = op10.dx();
  CHECK(op10.mass.front() == doctest::Approx(0.5 * dx));
  CHECK(op10.mass[4] == doctest::Approx(dx));

  SUBCASE("consistency: D applied to constants vanishes") {
    std::vector<double> ones(op10.size(), 1.0);
    for (double v : op10.dplus * ones) CHECK(std::abs(v) < 1e-12 / dx);
    for (double v : op10.dminus * ones) CHECK(std::abs(v) < 1e-12 / dx);
  }

  SUBCASE("M D+ + D-^T M = diag(-1, 0, ..., 0, 1)") {
    Eigen::MatrixXd r = sbp_form(op10);
    r(0, 0) += 1.0;
    r(9, 9) -= 1.0;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-14);
  }

  SUBCASE("M(D+ - D-) is the Neumann Laplacian stencil") {
    const Eigen::MatrixXd s =
        mass_matrix(op10) * (to_eigen(op10.dplus) - to_eigen(op10.dminus));
    CHECK(s(0, 0) == doctest::Approx(-1.0));
    CHECK(s(0, 1) == doctest::Approx(1.0));
    CHECK(s(4, 3) == doctest::Approx(1.0));
    CHECK(s(4, 4) == doctest::Approx(-2.0));
    CHECK(s(4, 5) == doctest::Approx(1.0));
    CHECK(s(9, 9) == doctest::Approx(-1.0));
  }

  SUBCASE("n = 5 dissipation spectrum against the Laplacian eigenvalue formula") {
    const auto op5 = make_order1_bounded(5, 0.0, 1.0);
    const auto ev = dissipation_eigenvalues(op5);
    // free Neumann Laplacian stencil: eigenvalues -(2 - 2 cos(pi k / n))
    for (int k = 0; k < 5; ++k) {
      const double expected = -(2.0 - 2.0 * std::cos(M_PI * k / 5.0));
      CHECK(ev(4 - k) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(ev.maxCoeff() == doctest::Approx(0.0).epsilon(1e-13));
  }

  CHECK_THROWS_AS(make_order1_bounded(2, 0.0, 1.0), InvalidArgument);
  CHECK(verify(op10).pass);
}

TEST_CASE("order-2 bounded pair matches the published closures") {
  const auto op = make_order2_bounded(10, 0.0, 1.0);
  const double dx = op.dx();

  CHECK(op.dplus.coeff(0, 0) == doctest::Approx(-3.0 / dx));
  CHECK(op.dplus.coeff(0, 1) == doctest::Approx(5.0 / dx));
  CHECK(op.dplus.coeff(0, 2) == doctest::Approx(-2.0 / dx));
  CHECK(op.dplus.coeff(4, 4) == doctest::Approx(-1.5 / dx));
  CHECK(op.dplus.coeff(4, 5) == doctest::Approx(2.0 / dx));
  CHECK(op.dplus.coeff(4, 6) == doctest::Approx(-0.5 / dx));
  // mirrored closures of D-
  CHECK(op.dminus.coeff(0, 0) == doctest::Approx(-1.0 / dx));
  CHECK(op.dminus.coeff(0, 1) == doctest::Approx(1.0 / dx));
  CHECK(op.dminus.coeff(9, 7) == doctest::Approx(2.0 / dx));
  CHECK(op.dminus.coeff(9, 8) == doctest::Approx(-5.0 / dx));
  CHECK(op.dminus.coeff(9, 9) == doctest::Approx(3.0 / dx));

  CHECK(op.mass[0] == doctest::Approx(dx / 4));
  CHECK(op.mass[1] == doctest::Approx(5 * dx / 4));
  CHECK(op.mass[2] == doctest::Approx(dx));

  SUBCASE("D- is exact on linears away from the closures") {
    std::vector<double> x = op.grid.nodes;
    const auto d = op.dminus * x;
    for (int i = 0; i < 10; ++i)
      if (op.interior_row[i]) CHECK(d[i] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("full verification report passes") {
    const auto rep = verify(op);
    CHECK(rep.pass);
    CHECK(rep.interior_order_measured == 2);
    CHECK(rep.boundary_order_measured == 1);
  }

  CHECK_THROWS_AS(make_order2_bounded(5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("order-2 periodic pair is the displayed circulant") {
  const auto op = make_order2_periodic(8, 0.0, 1.0);
  const double dx = 1.0 / 8.0;
  CHECK(op.dx() == doctest::Approx(dx));

  // first row (-3/2, 2, -1/2, 0, ...), wrap rows at the bottom
  CHECK(op.dplus.coeff(0, 0) == doctest::Approx(-1.5 / dx));
  CHECK(op.dplus.coeff(0, 1) == doctest::Approx(2.0 / dx));
  CHECK(op.dplus.coeff(0, 2) == doctest::Approx(-0.5 / dx));
  CHECK(op.dplus.coeff(0, 3) == 0.0);
  CHECK(op.dplus.coeff(6, 0) == doctest::Approx(-0.5 / dx));
  CHECK(op.dplus.coeff(7, 0) == doctest::Approx(2.0 / dx));
  CHECK(op.dplus.coeff(7, 1) == doctest::Approx(-0.5 / dx));
  CHECK(op.dminus.coeff(0, 6) == doctest::Approx(0.5 / dx));
  CHECK(op.dminus.coeff(0, 7) == doctest::Approx(-2.0 / dx));

  SUBCASE("D+ annihilates constants") {
    std::vector<double> ones(8, 1.0);
    for (double v : op.dplus * ones) CHECK(std::abs(v) < 1e-12 / dx);
  }

  SUBCASE("dissipation eigenvalues match the circulant symbol") {
    const auto ev = dissipation_eigenvalues(op);  // brute-force oracle
    std::vector<double> expected;
    for (int k = 0; k < 8; ++k) {
      const double th = 2.0 * M_PI * k / 8.0;
      expected.push_back(-(std::cos(2 * th) - 4 * std::cos(th) + 3.0));
    }
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 8; ++k) CHECK(ev(k) == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK(ev.maxCoeff() < 1e-13);
  }

  CHECK(verify(op).pass);
  CHECK_THROWS_AS(make_order2_periodic(4, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("derived periodic stencils") {
  SUBCASE("q = 2 reproduces the built-in circulant exactly") {
    const auto a = derive_periodic_upwind(2, 16, -1.0, 1.0);
    const auto b = make_order2_periodic(16, -1.0, 1.0);
    CHECK(a.dplus == b.dplus);
    CHECK(a.dminus == b.dminus);
  }

  SUBCASE("q = 1 is the one-sided difference") {
    const auto st = derive_periodic_stencil(1);
    REQUIRE(st.offsets == std::vector<int>{0, 1});
    CHECK(st.weights[0].num == -1);
    CHECK(st.weights[0].den == 1);
    CHECK(st.weights[1].num == 1);
  }

  SUBCASE("q = 3 weights against an independent Vandermonde solve") {
    // solve the 4x4 moment system with Eigen
    const std::vector<int> offs{-1, 0, 1, 2};
    Eigen::MatrixXd a(4, 4);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
    b(1) = 1.0;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) a(k, j) = std::pow(offs[j], k);
    const Eigen::VectorXd c = a.fullPivLu().solve(b);
    const auto st = derive_periodic_stencil(3);
    for (int j = 0; j < 4; ++j) CHECK(st.weights[j].value() == doctest::Approx(c(j)).epsilon(1e-14));
    // (-2, -3, 6, -1)/6
    CHECK(st.weights[0].value() == doctest::Approx(-2.0 / 6.0));
    CHECK(st.weights[1].value() == doctest::Approx(-3.0 / 6.0));
    CHECK(st.weights[2].value() == doctest::Approx(1.0));
    CHECK(st.weights[3].value() == doctest::Approx(-1.0 / 6.0));
    // order-3 exactness on x^3 away from the wrap
    const auto op = derive_periodic_upwind(3, 32, 0.0, 1.0);
    std::vector<double> x3(32), d(32);
    for (int i = 0; i < 32; ++i) x3[i] = std::pow(op.grid.nodes[i], 3);
    d = op.dplus * x3;
    for (int i = 2; i < 28; ++i)
      CHECK(d[i] == doctest::Approx(3.0 * op.grid.nodes[i] * op.grid.nodes[i]).epsilon(1e-9));
  }

  SUBCASE("orders 1..7 pass the full verification") {
    for (int q = 1; q <= 7; ++q) {
      const auto op = derive_periodic_upwind(q, 4 * q + 12, -1.0, 1.0);
      const auto rep = verify(op);
      INFO("order ", q);
      CHECK(rep.pass);
      // NSD also against the brute-force oracle
      CHECK(dissipation_eigenvalues(op).maxCoeff() < 1e-12);
    }
  }

  CHECK_THROWS_AS(derive_periodic_upwind(3, 5, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("DGSEM p=2 element operator") {
  const auto op = make_dgsem_p2(0.0, 1.0);
  SUBCASE("M D + D^T M = diag(-1, 0, 1) exactly") {
    Eigen::MatrixXd r = sbp_form(op);
    r(0, 0) += 1.0;
    r(2, 2) -= 1.0;
    CHECK(r.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("derivative of constants and of x^2") {
    std::vector<double> ones{1.0, 1.0, 1.0};
    for (double v : op.dplus * ones) CHECK(v == 0.0);
    std::vector<double> x2{0.0, 0.25, 1.0};
    const auto d = op.dplus * x2;
    CHECK(d[0] == doctest::Approx(0.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(2.0));
  }
  SUBCASE("scaling to an arbitrary element") {
    const auto op2 = make_dgsem_p2(2.0, 4.0);
    CHECK(op2.mass[1] == doctest::Approx(2.0 * 2.0 / 3.0));
    std::vector<double> x{2.0, 3.0, 4.0};
    const auto d = op2.dplus * x;
    for (double v : d) CHECK(v == doctest::Approx(1.0));
    CHECK(verify(op2).pass);
  }
  CHECK_THROWS_AS(make_dgsem_p2(1.0, 1.0), InvalidArgument);
}

TEST_CASE("coupling two DGSEM elements reproduces the global operators") {
  const auto global = couple(make_dgsem_p2(0.0, 1.0), make_dgsem_p2(1.0, 2.0));
  REQUIRE(global.size() == 6);

  SUBCASE("M D+ + D-^T M = diag(-1, 0, 0, 0, 0, 1)") {
    Eigen::MatrixXd r = sbp_form(global);
    r(0, 0) += 1.0;
    r(5, 5) -= 1.0;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-13);
  }

  SUBCASE("seam rows match the worked example") {
    CHECK(global.dplus.coeff(2, 2) == doctest::Approx(-3.0));
    CHECK(global.dplus.coeff(2, 3) == doctest::Approx(6.0));
    CHECK(global.dminus.coeff(3, 2) == doctest::Approx(-6.0));
    CHECK(global.dminus.coeff(3, 3) == doctest::Approx(3.0));
  }

  SUBCASE("dissipation eigenvalues are {0 x5, -2 x1}") {
    const auto ev = dissipation_eigenvalues(global);
    CHECK(ev(0) == doctest::Approx(-2.0).epsilon(1e-12));
    for (int k = 1; k < 6; ++k) CHECK(std::abs(ev(k)) < 1e-12);
  }

  CHECK(verify(global).pass);
}

TEST_CASE("general coupling properties") {
  SUBCASE("coupled order-1 pairs stay consistent") {
    const auto c = couple(make_order1_bounded(8, 0.0, 0.5), make_order1_bounded(12, 0.5, 1.0));
    std::vector<double> ones(c.size(), 1.0);
    const double dx = c.dx();
    for (double v : c.dplus * ones) CHECK(std::abs(v) <= 1e-12 / dx);
    for (double v : c.dminus * ones) CHECK(std::abs(v) <= 1e-12 / dx);
    CHECK(verify(c).pass);
  }

  SUBCASE("couple is associative at the matrix level") {
    const auto a = make_order2_bounded(8, 0.0, 1.0);
    const auto b = make_dgsem_p2(1.0, 1.5);
    const auto c = make_order1_bounded(6, 1.5, 3.0);
    const auto left = couple(couple(a, b), c);
    const auto right = couple(a, couple(b, c));
    const auto dl = left.dplus.dense();
    const auto dr = right.dplus.dense();
    REQUIRE(dl.size() == dr.size());
    for (std::size_t i = 0; i < dl.size(); ++i) CHECK(std::abs(dl[i] - dr[i]) <= 1e-14);
    const auto ml = left.dminus.dense();
    const auto mr = right.dminus.dense();
    for (std::size_t i = 0; i < ml.size(); ++i) CHECK(std::abs(ml[i] - mr[i]) <= 1e-14);
  }

  SUBCASE("interface mismatch is rejected") {
    CHECK_THROWS_AS(couple(make_dgsem_p2(0.0, 1.0), make_dgsem_p2(1.1, 2.0)), InvalidArgument);
  }

  SUBCASE("order of accuracy is the minimum of the inputs") {
    const auto c = couple(make_order2_bounded(8, 0.0, 1.0), make_order1_bounded(5, 1.0, 2.0));
    CHECK(c.interior_order == 1);
    CHECK(verify(c).pass);
  }
}

TEST_CASE("periodic closure of bounded blocks") {
  SUBCASE("a single order-2 block closed periodically is a periodic pair") {
    const auto p = couple_periodic({make_order2_bounded(12, 0.0, 1.0)});
    CHECK(p.periodic);
    const Eigen::MatrixXd r = sbp_form(p);
    CHECK(r.cwiseAbs().maxCoeff() < 1e-13 * to_eigen(p.dplus).cwiseAbs().maxCoeff());
    CHECK(verify(p).pass);
  }

  SUBCASE("two order-1 blocks keep the upwind interior stencil away from seams") {
    const auto p = couple_periodic(
        {make_order1_bounded(8, 0.0, 1.0), make_order1_bounded(8, 1.0, 2.0)});
    const double dx = p.dx();
    for (int i : {2, 3, 4, 5, 10, 11, 12}) {
      CHECK(p.dminus.coeff(i, i - 1) == doctest::Approx(-1.0 / dx));
      CHECK(p.dminus.coeff(i, i) == doctest::Approx(1.0 / dx));
    }
    CHECK(verify(p).pass);
  }

  SUBCASE("a ring of four DGSEM elements") {
    std::vector<OperatorPair> ring;
    for (int k = 0; k < 4; ++k) ring.push_back(make_dgsem_p2(0.5 * k, 0.5 * (k + 1)));
    const auto p = couple_periodic(ring);
    CHECK(dissipation_eigenvalues(p).maxCoeff() <= 1e-12);
    CHECK(verify(p).pass);
  }
}

TEST_CASE("central decomposition") {
  const auto op = make_order2_periodic(16, -1.0, 1.0);
  const auto dec = central_decomposition(op);

  SUBCASE("central + dissipation = D+ exactly") {
    const Eigen::MatrixXd r =
        to_eigen(dec.central) + to_eigen(dec.dissipation) - to_eigen(op.dplus);
    CHECK(r.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("the central part is a classical periodic SBP operator") {
    const Eigen::MatrixXd c = to_eigen(dec.central);
    const Eigen::MatrixXd r = mass_matrix(op) * c + c.transpose() * mass_matrix(op);
    CHECK(r.cwiseAbs().maxCoeff() <
          1e-13 * (mass_matrix(op) * c).cwiseAbs().maxCoeff());
  }

  SUBCASE("bounded case satisfies the classical SBP identity") {
    const auto b = make_order2_bounded(10, 0.0, 1.0);
    const auto db = central_decomposition(b);
    const Eigen::MatrixXd c = to_eigen(db.central);
    Eigen::MatrixXd r = mass_matrix(b) * c + c.transpose() * mass_matrix(b);
    r(0, 0) += 1.0;
    r(9, 9) -= 1.0;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-13 * (mass_matrix(b) * c).cwiseAbs().maxCoeff());
  }
}

TEST_CASE("quadrature and verification edge cases") {
  SUBCASE("M-weighted quadrature integrates constants exactly") {
    for (const auto& op :
         {make_order2_bounded(17, -2.0, 3.0), make_order2_periodic(23, -2.0, 3.0),
          make_dgsem_p2(-2.0, 3.0)}) {
      double s = 0.0;
      for (double m : op.mass) s += m * 7.5;
      CHECK(s == doctest::Approx(5.0 * 7.5).epsilon(1e-13));
    }
  }

  SUBCASE("a perturbed operator fails with the SBP residual named") {
    auto op = make_order2_bounded(10, 0.0, 1.0);
    auto t = op.dplus.triplets();
    t[0].value += 1e-3;
    op.dplus = StencilMatrix::from_triplets(op.size(), std::move(t));
    const auto rep = verify(op);
    CHECK(!rep.pass);
    CHECK(rep.first_failure()->name == "sbp_residual");
    CHECK_THROWS_AS(expect_valid(op), VerificationError);
  }

  SUBCASE("an anti-dissipative circulant fails the NSD check") {
    auto op = make_order2_periodic(12, 0.0, 1.0);
    std::swap(op.dplus, op.dminus);  // flips the sign of M(D+ - D-)
    const auto rep = verify(op);
    CHECK(!rep.pass);
    const auto* nsd = rep.find("nsd_max_eigenvalue");
    REQUIRE(nsd != nullptr);
    CHECK(!nsd->pass);
  }

  SUBCASE("order-1 pair reports boundary order 0, interior order 1") {
    const auto rep = verify(make_order1_bounded(12, 0.0, 1.0));
    CHECK(rep.boundary_order_measured == 0);
    CHECK(rep.interior_order_measured == 1);
  }
}
