#pragma once

#include <cstdint>
#include <vector>

#include "sobolev/capacity.hpp"
#include "sobolev/grid.hpp"

namespace sobolev {

/// pi^(s/2) / Gamma(s/2 + 1); at integer s this is the unit-ball volume.
double alpha(double s);

/// A bounded set represented by sample points, each thickened by the
/// resolution radius (0 for bare point sets).
struct PointCloud {
    std::vector<Point> points;
    double resolution = 0.0;
};

PointCloud segment_cloud(const Point& a, const Point& b, int samples);
PointCloud disc_cloud(const Point& center, double radius, int per_axis);

/// One covering upper estimate at mesh delta: dyadic boxes of side
/// 2^-level meeting the cloud, each shrunk to the bounding box of its own
/// points (plus resolution). raw_value keeps the unshrunk dyadic value;
/// shrinking never increases it.
struct CoveringEstimate {
    double s = 0.0;
    double delta = 0.0;
    int level = 0;
    struct Cover {
        std::vector<long long> cell;
        double diam;
    };
    std::vector<Cover> boxes;
    double value = 0.0;
    double raw_value = 0.0;
};

CoveringEstimate hausdorff_upper(const PointCloud& e_set, double s, double delta);

/// Estimates over delta, delta/2, ..., approximating the supremum in delta.
std::vector<CoveringEstimate> hausdorff_history(const PointCloud& e_set, double s, double delta0,
                                                int levels);

/// True when a covering box contains the point within its dyadic bounds.
bool cover_contains(const CoveringEstimate& est, const Point& x);

/// One-directional consistency check for 1 <= p < n: a vanishing
/// (n-p)-dimensional covering estimate predicts a capacity-null set. The
/// capacity refinement runs either way so the report carries both
/// trajectories; the assertion is only made when the covering estimate
/// tends to zero.
struct FrostmanReport {
    std::vector<CoveringEstimate> hausdorff;
    bool hausdorff_tends_to_zero = false;
    NullClassification capacity;
    bool assertion_made = false;
    bool assertion_holds = true;
};

struct FrostmanGrid {
    Point box_lo, box_hi;
    Region omega;
    int base_nodes = 17;
    int levels = 4;
};

FrostmanReport frostman_consistency(const PointCloud& e_set, double p, int n,
                                    const FrostmanGrid& grid_spec, double delta0 = 0.5,
                                    int cover_levels = 5,
                                    const CapacityOptions& opts = {});

}  // namespace sobolev
