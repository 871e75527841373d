#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sobolev/convergence.hpp"
#include "sobolev/grid.hpp"

namespace sobolev {

/// Geometric radii r0 * ratio^j, j = 0..count-1, standing in for r -> 0+.
/// The smallest radius must span at least 3 grid spacings.
struct RadiusSchedule {
    double r0 = 0.1;
    double ratio = 0.5;
    int count = 6;

    std::vector<double> radii() const;
    double smallest() const;
    void validate(const Grid& g) const;
};

struct RepOptions {
    double rep_tol = 1e-3;
};

/// Ball-average limit estimate. averages holds the raw sequence a_j; the
/// estimate extrapolates a_j = a_inf + c r^beta over the last four radii
/// (beta fitted in log space on successive differences). converged is
/// |a_m - a_{m-1}| < rep_tol (1 + |a_m|); when it fails the estimate is 0,
/// with the flag distinguishing that branch from an honest zero limit.
struct RepResult {
    Point estimate;
    bool converged = false;
    std::vector<Point> averages;
};

RepResult precise_rep(const GridFunction& f, const Point& x, const RadiusSchedule& sched,
                      const RepOptions& opts = {});
RepResult precise_rep(const VectorField& v, const Point& x, const RadiusSchedule& sched,
                      const RepOptions& opts = {});

/// Average of |values - center|^p over B(x, r); Euclidean magnitude for
/// vector fields.
double lp_deviation(const GridFunction& f, const Point& x, double r, double p, double center);
double lp_deviation(const VectorField& v, const Point& x, double r, double p,
                    const Point& center);

enum class PointVerdict { LpPoint, NotLpPoint, Inconclusive };
std::string_view to_string(PointVerdict v);

struct ClassifyOptions {
    double lp_tol = 1e-3;   // LpPoint requires the last deviation below this
    double not_tol = 1e-1;  // NotLpPoint requires the last 3 deviations above this
    RepOptions rep;
};

struct PointClassification {
    PointVerdict verdict = PointVerdict::Inconclusive;
    Point representative;
    bool rep_converged = false;
    std::vector<double> radii;
    std::vector<double> deviations;
    double slope = 0.0;  // log-log slope of deviations vs radii
};

PointClassification classify_lp_point(const GridFunction& f, const Point& x, double p,
                                      const RadiusSchedule& sched, const ClassifyOptions& = {});
PointClassification classify_lp_point(const VectorField& v, const Point& x, double p,
                                      const RadiusSchedule& sched, const ClassifyOptions& = {});

/// Per-point, per-derivative classification of the finite-difference
/// derivative fields of f at order k.
struct RefinedGradientReport {
    struct Row {
        Point x;
        std::vector<int> orders;  // derivative multi-index
        PointClassification cls;
    };
    std::vector<Row> rows;
    struct PointSummary {
        Point x;
        PointVerdict verdict;     // worst verdict across the point's rows
        Point gradient_estimate;  // assembled from first-order rows (k >= 1)
    };
    std::vector<PointSummary> points;
    double failing_fraction = 0.0;         // NotLpPoint points / points
    std::vector<std::size_t> exceptional;  // indices into points with NotLpPoint
};

/// include_lower adds every |alpha| <= k instead of just |alpha| = k.
RefinedGradientReport classify_refined_gradient(const GridFunction& f, double p,
                                                std::span<const Point> points, int k,
                                                const RadiusSchedule& sched,
                                                const ClassifyOptions& opts = {},
                                                bool include_lower = false, int jobs = 1);

}  // namespace sobolev
