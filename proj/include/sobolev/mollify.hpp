#pragma once

#include <cstdint>
#include <vector>

#include "sobolev/grid.hpp"

namespace sobolev {

/// Normalization constant of the compactly supported bump
/// C * exp(1/(|x|^2 - 1)) on B(0,1): the radial quadrature is refined
/// until the unit-mass condition holds to 1e-8. Cached per dimension.
double kernel_constant(int dim);

/// Value of the normalized bump at x for the given dimension.
double bump_value(int dim, const Point& x);
Point bump_gradient(int dim, const Point& x);

/// Rescaled bump sampled on the lattice stencil of radius eps. Weights are
/// renormalized to sum to exactly 1 so constants mollify to themselves;
/// raw_mass records the plain sampled integral before renormalization.
class MollifierKernel {
public:
    MollifierKernel(const Grid& g, double eps);

    double eps() const { return eps_; }
    double raw_mass() const { return raw_mass_; }
    int reach(int axis) const { return reach_[axis]; }
    const std::vector<std::vector<int>>& offsets() const { return offsets_; }
    const std::vector<double>& weights() const { return weights_; }

private:
    double eps_;
    double raw_mass_;
    std::vector<int> reach_;
    std::vector<std::vector<int>> offsets_;
    std::vector<double> weights_;
};

/// Convolution smoothing restricted to the nodes farther than eps from
/// the grid boundary; values off that set are zero-filled and the mask
/// is authoritative.
struct MollifiedFunction {
    GridFunction fn;
    std::vector<std::uint8_t> defined;

    NodeMask mask() const { return NodeMask{defined}; }
    /// Mask eroded by `layers` grid layers (for stencils applied on top).
    NodeMask eroded_mask(int layers) const;
};

MollifiedFunction mollify(const GridFunction& f, double eps);

}  // namespace sobolev
