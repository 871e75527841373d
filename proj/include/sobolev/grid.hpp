#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "sobolev/errors.hpp"

namespace sobolev {

using Point = std::vector<double>;

/// Volume of the unit ball in the given dimension.
double unit_ball_volume(int dim);

double euclidean_norm(std::span<const double> v);
double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Uniform rectangular lattice: >= 3 nodes per axis, spacing
/// (upper - lower) / (count - 1) per axis. Node order is lexicographic
/// with axis 0 varying fastest; every reduction in this library walks
/// nodes in that order, so results do not depend on scheduling.
class Grid {
public:
    Grid(Point lower, Point upper, std::vector<int> counts);

    int dim() const { return static_cast<int>(counts_.size()); }
    double lower(int axis) const { return lower_[axis]; }
    double upper(int axis) const { return upper_[axis]; }
    double spacing(int axis) const { return spacing_[axis]; }
    double max_spacing() const;
    int count(int axis) const { return counts_[axis]; }
    std::size_t size() const { return total_; }

    double coord(int axis, int i) const { return lower_[axis] + spacing_[axis] * i; }
    std::size_t index(std::span<const int> idx) const;
    void unravel(std::size_t node, std::span<int> idx) const;
    Point coords(std::size_t node) const;

    /// True if x lies in the closed bounding box, inflated by `slack` per axis.
    bool contains(const Point& x, double slack = 0.0) const;

    bool operator==(const Grid& other) const;

private:
    Point lower_, upper_, spacing_;
    std::vector<int> counts_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

/// Immutable scalar samples on a grid, one value per node, all finite.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    double operator[](std::size_t node) const { return values_[node]; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Immutable per-node n-vectors on a grid (node-major storage).
class VectorField {
public:
    VectorField(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    int components() const { return grid_.dim(); }
    double value(std::size_t node, int c) const {
        return values_[node * static_cast<std::size_t>(components()) + static_cast<std::size_t>(c)];
    }
    Point at(std::size_t node) const;
    std::span<const double> values() const { return values_; }

private:
    Grid grid_;
    std::vector<double> values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double c, const GridFunction& f);
/// Pointwise product.
GridFunction operator*(const GridFunction& a, const GridFunction& b);
GridFunction component(const VectorField& v, int c);

// Regions of integration: open balls, axis-aligned boxes, explicit node masks.
struct Ball {
    Point center;
    double radius = 0.0;
};
struct Box {
    Point lo;
    Point hi;
};
struct NodeMask {
    std::vector<std::uint8_t> inside;  // length == grid.size()
};
using Region = std::variant<Ball, Box, NodeMask>;

void validate_region(const Region& region, const Grid& g);
Box region_bbox(const Region& region, const Grid& g);

struct WeightedNode {
    std::size_t node;
    double weight;
};

/// Quadrature weights of the region: each node owns its dual cell
/// (half-spacing each side, clipped at the grid boundary). Cells fully
/// inside a ball count with full volume; cells cut by the sphere use a
/// 3^n midpoint subsample for the coverage fraction. Box overlaps are
/// exact. Nodes with zero weight are omitted; order is ascending node id.
std::vector<WeightedNode> region_weights(const Grid& g, const Region& region);

/// (sum_cells w |v|^p)^(1/p); p >= 1. Throws domain_error when the region
/// misses the grid. Vector values use the Euclidean norm per node.
double lp_norm(const GridFunction& f, double p, const Region& region);
double lp_norm(const VectorField& v, double p, const Region& region);

/// Sum over all multi-indices |alpha| <= k of lp_norm of the repeated
/// finite-difference derivative. The region must keep 2*k*h clear of the
/// grid boundary per axis so no nested stencil leans on one-sided rows.
double wkp_norm(const GridFunction& f, int k, double p, const Region& region);

/// Average over B(x, r); the ball must lie inside the grid box.
double ball_average(const GridFunction& f, const Point& x, double r);
Point ball_average(const VectorField& v, const Point& x, double r);

/// Average of |value - center|^p over B(x, r).
double ball_deviation(const GridFunction& f, const Point& x, double r, double center, double p);
double ball_deviation(const VectorField& v, const Point& x, double r, const Point& center, double p);

/// First derivative along one axis: central differences inside,
/// one-sided second-order stencils on the two boundary layers (exact on
/// quadratics everywhere, so affine fields come out bit-tight).
GridFunction axis_derivative(const GridFunction& f, int axis);
VectorField gradient_fd(const GridFunction& f);

/// Repeated axis derivatives; orders[a] applications along axis a.
GridFunction partial_derivative(const GridFunction& f, std::span<const int> orders);

/// All per-axis order tuples with total <= max_total, sorted by total
/// order then lexicographically.
std::vector<std::vector<int>> derivative_orders(int dim, int max_total);

}  // namespace sobolev
