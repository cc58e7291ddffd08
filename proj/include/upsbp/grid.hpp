#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "upsbp/common.hpp"

namespace upsbp {

/// 1D grid. Bounded grids include both end points; periodic grids built by
/// the stencil constructors live in [xmin, xmax). Grids obtained by coupling
/// elements store the shared interface coordinate once per element, so nodes
/// are nondecreasing rather than strictly increasing.
struct Grid1D {
  double xmin = 0.0;
  double xmax = 1.0;
  std::vector<double> nodes;

  static Grid1D uniform_bounded(int n, double xmin, double xmax) {
    if (n < 2) throw InvalidArgument("uniform_bounded: need at least 2 nodes");
    if (!(xmax > xmin)) throw InvalidArgument("uniform_bounded: xmax <= xmin");
    Grid1D g{xmin, xmax, {}};
    g.nodes.resize(n);
    const double dx = (xmax - xmin) / (n - 1);
    for (int i = 0; i < n; ++i) g.nodes[i] = xmin + i * dx;
    g.nodes.front() = xmin;
    g.nodes.back() = xmax;
    return g;
  }

  static Grid1D uniform_periodic(int n, double xmin, double xmax) {
    if (n < 1) throw InvalidArgument("uniform_periodic: need at least 1 node");
    if (!(xmax > xmin)) throw InvalidArgument("uniform_periodic: xmax <= xmin");
    Grid1D g{xmin, xmax, {}};
    g.nodes.resize(n);
    const double dx = (xmax - xmin) / n;
    for (int i = 0; i < n; ++i) g.nodes[i] = xmin + i * dx;
    return g;
  }

  int size() const { return static_cast<int>(nodes.size()); }
  double length() const { return xmax - xmin; }

  /// Smallest positive node spacing. Duplicated interface nodes are skipped.
  double min_spacing() const {
    double h = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const double d = nodes[i] - nodes[i - 1];
      if (d > 0.0 && d < h) h = d;
    }
    if (!std::isfinite(h)) h = length();  // single node
    return h;
  }
};

}  // namespace upsbp
