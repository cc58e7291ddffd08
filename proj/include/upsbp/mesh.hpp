#pragma once

#include <cstddef>

#include "upsbp/operators.hpp"

namespace upsbp {

/// Affine rescale of an operator pair to a new interval. Derivatives scale
/// with the inverse length ratio, the norm with the length ratio.
OperatorPair rescale_operator(const OperatorPair& op, double new_xmin, double new_xmax);

/// Structured mesh: kx*ky conforming elements, each carrying the same
/// operator pair per direction (scaled to the element size). A single-block
/// layout uses one periodic pair per direction and no interface terms.
struct MeshLayout {
  int dim = 1;
  bool single_block = false;
  int kx = 1, ky = 1;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 0;
  OperatorPair opx;  // element operator, scaled to element length
  OperatorPair opy;  // dim == 2 only

  int nx() const { return opx.size(); }
  int ny() const { return dim == 2 ? opy.size() : 1; }
  int elements() const { return kx * ky; }
  int nodes_per_element() const { return nx() * ny(); }
  long total_nodes() const { return static_cast<long>(elements()) * nodes_per_element(); }

  double element_length_x() const { return (xmax - xmin) / kx; }
  double element_length_y() const { return (ymax - ymin) / ky; }

  double x_of(int ex, int i) const {
    return single_block ? opx.grid.nodes[i] : xmin + ex * element_length_x() + opx.grid.nodes[i];
  }
  double y_of(int ey, int j) const {
    if (dim == 1) return 0.0;
    return single_block ? opy.grid.nodes[j] : ymin + ey * element_length_y() + opy.grid.nodes[j];
  }

  /// Quadrature weight of one node (tensor product of the 1D norms).
  double weight(int node) const {
    const int i = node % nx(), j = node / nx();
    return dim == 1 ? opx.mass[i] : opx.mass[i] * opy.mass[j];
  }

  double volume() const { return dim == 1 ? xmax - xmin : (xmax - xmin) * (ymax - ymin); }
};

/// One periodic block; `op` must be periodic and defines the domain.
MeshLayout make_periodic_block_1d(const OperatorPair& op);

/// K bounded elements on [xmin, xmax]; `element_op` may live on any interval
/// and is rescaled to [0, L]. Periodic wrap is handled by the SATs.
MeshLayout make_multielement_1d(const OperatorPair& element_op, int k, double xmin, double xmax);

MeshLayout make_periodic_block_2d(const OperatorPair& opx, const OperatorPair& opy);

MeshLayout make_multielement_2d(const OperatorPair& element_op, int kx, int ky, double xmin,
                                double xmax, double ymin, double ymax);

}  // namespace upsbp
