#pragma once

#include "sobolev/grid.hpp"

namespace sobolev {

/// Tensor-product cubic Lagrange interpolation of grid samples at an
/// arbitrary interior point (exact for per-axis degree <= 3). The 4-node
/// window is clamped at the grid boundary.
double interpolate(const GridFunction& f, const Point& x);

/// A lattice over the bounding box of `region`, inflated just enough that
/// the region keeps `inset_stencils` nested difference stencils clear of
/// the lattice boundary. The lattice is fixed by (region, nodes, inset)
/// alone, so studies over shrinking parameters share one discretization.
Grid reference_lattice(const Region& region, int nodes_per_axis, int inset_stencils);

}  // namespace sobolev
