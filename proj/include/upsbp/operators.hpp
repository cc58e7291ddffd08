#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "upsbp/grid.hpp"
#include "upsbp/rational.hpp"
#include "upsbp/stencil_matrix.hpp"

namespace upsbp {

/// An upwind SBP operator pair: grid, diagonal norm matrix M, and the two
/// derivative matrices D+ (downwind-biased stencil) and D- (upwind-biased).
/// The boundary projection vectors are implicit: tL = e_0, tR = e_{n-1}.
/// Classical SBP operators are represented with dplus == dminus.
///
/// Immutable after construction; safe to share across threads.
struct OperatorPair {
  Grid1D grid;
  std::vector<double> mass;  // diagonal of M
  StencilMatrix dplus;
  StencilMatrix dminus;
  bool periodic = false;
  bool circulant = false;  // periodic with position-independent stencil
  int interior_order = 1;
  /// interior_row[i] == 1 iff row i carries the full interior order of
  /// accuracy (boundary closures and their images under coupling are 0).
  std::vector<std::uint8_t> interior_row;

  int size() const { return grid.size(); }
  double dx() const { return grid.min_spacing(); }
};

/// central = (D- + D+)/2 is a classical (periodic) SBP operator w.r.t. the
/// same M; dissipation = (D+ - D-)/2.
struct CentralDecomposition {
  StencilMatrix central;
  StencilMatrix dissipation;
};

CentralDecomposition central_decomposition(const OperatorPair& op);

/// First-order pair with M = dx*diag(1/2, 1, ..., 1, 1/2); the dissipation
/// matrix M(D+ - D-) is the Neumann Laplacian stencil.
OperatorPair make_order1_bounded(int n_nodes, double xmin, double xmax);

/// Second-order pair with M = dx*diag(1/4, 5/4, 1, ..., 1, 5/4, 1/4) and
/// interior stencil (-3/2, 2, -1/2)/dx.
OperatorPair make_order2_bounded(int n_nodes, double xmin, double xmax);

/// Circulant pair with D+ stencil (-3/2, 2, -1/2) at offsets (0, 1, 2) and
/// the mirrored D-; M = dx*I.
OperatorPair make_order2_periodic(int n_nodes, double xmin, double xmax);

/// Interior stencil of interior order q on offsets
/// {-floor((q-1)/2), ..., q - floor((q-1)/2)}, exact rational solve.
struct RationalStencil {
  int order = 0;
  std::vector<int> offsets;        // for D+
  std::vector<Rational> weights;   // before the 1/dx factor
};

RationalStencil derive_periodic_stencil(int order);

/// Circulant pair of the derived stencil family. Throws DerivationError if
/// the dissipation matrix fails the negative-semidefiniteness check.
OperatorPair derive_periodic_upwind(int order, int n_nodes, double xmin, double xmax);

/// Degree-2 Gauss-Lobatto element operator (D+ = D- = D) on 3 nodes.
OperatorPair make_dgsem_p2(double xmin, double xmax);

/// Block-couple two bounded pairs sharing an interface coordinate. The joint
/// grid stores the interface node once per side.
OperatorPair couple(const OperatorPair& left, const OperatorPair& right);

/// Couple a chain of bounded pairs and close the last-to-first interface,
/// yielding a periodic pair on the concatenated grid.
OperatorPair couple_periodic(const std::vector<OperatorPair>& blocks);

// -- verification ------------------------------------------------------------

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct OperatorReport {
  std::vector<CheckResult> checks;
  int interior_order_measured = 0;
  int boundary_order_measured = 0;
  bool pass = true;

  const CheckResult* find(const std::string& name) const;
  const CheckResult* first_failure() const;
  std::string summary() const;
};

/// Run all defining checks: norm quadrature, SBP residual, symmetry and
/// negative semidefiniteness of M(D+ - D-), consistency, and monomial
/// accuracy up to the declared interior order. Never mutates the pair.
OperatorReport verify(const OperatorPair& op);

/// verify() + throw VerificationError naming the first failed residual.
void expect_valid(const OperatorPair& op);

/// Largest eigenvalue of the symmetrized dissipation matrix M(D+ - D-).
double dissipation_max_eigenvalue(const OperatorPair& op);

/// Rows of the pair that reproduce the declared interior order on monomials.
/// Used by the table loader; constructors know their closures directly.
std::vector<std::uint8_t> infer_interior_rows(const OperatorPair& op);

// -- coefficient tables -------------------------------------------------------

/// Plain-text operator table. Invariants are re-verified on load; bad tables
/// are rejected with the failed residual named.
OperatorPair load_operator_table(std::istream& in);
OperatorPair load_operator_table_file(const std::string& path);

void save_operator_table(const OperatorPair& op, std::ostream& out);
void save_operator_table_file(const OperatorPair& op, const std::string& path);

/// Write the derived periodic stencil of the given order as a table with
/// exact rational entries.
void save_derived_stencil_table(int order, int n_nodes, double xmin, double xmax,
                                std::ostream& out);

}  // namespace upsbp
