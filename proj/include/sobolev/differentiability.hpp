#pragma once

#include <span>
#include <vector>

#include "sobolev/convergence.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/interpolate.hpp"
#include "sobolev/representative.hpp"

namespace sobolev {

/// The linear map z -> a . z attached to a base point, with a taken from
/// a converged ball-average limit of the finite-difference gradient.
struct FormalDifferential {
    Point base;
    Point a;
};

/// Throws domain_error when the gradient averages do not converge at x
/// (the hypothesis of the convergence statements fails there).
FormalDifferential formal_differential(const GridFunction& f, const Point& x,
                                       const RadiusSchedule& sched, const RepOptions& opts = {});

struct QuotientOptions {
    int nodes_per_axis = 65;
    int inset_stencils = 2;
};

/// z -> (f(x + t z) - f(x)) / t sampled on the fixed reference lattice of
/// U, with f evaluated by cubic interpolation of its grid samples. The
/// image x + t * lattice must stay inside f's grid and t must spread U
/// over at least two source cells.
GridFunction difference_quotient(const GridFunction& f, const Point& x, double t,
                                 const Region& u_region, const QuotientOptions& opts = {});

/// Terms of the order-1 norm of f_{x,t} - a.z over U: the function term
/// and the per-axis derivative terms (their sum is the norm).
struct W1pError {
    double total = 0.0;
    double value_part = 0.0;
    double grad_part = 0.0;
};

W1pError diffquot_w1p_error(const GridFunction& f, const Point& x, double t, double p,
                            const Region& u_region, const FormalDifferential& diff,
                            const QuotientOptions& opts = {});

struct DiffQuotStudy {
    FormalDifferential differential;
    std::vector<W1pError> parts;
    ConvergenceReport report;
};

DiffQuotStudy diffquot_study(const GridFunction& f, const Point& x, double p,
                             const Region& u_region, std::span<const double> t_schedule,
                             const RadiusSchedule& rsched, const QuotientOptions& qopts = {},
                             const ConvergenceOptions& copts = {}, const RepOptions& ropts = {});

enum class RegressionInit { FromLeastSquares, FromZero };

struct ApproxDiffOptions {
    RegressionInit init = RegressionInit::FromLeastSquares;
    int irls_max_iter = 60;
    ConvergenceOptions conv;
    RepOptions rep;
    double identity_tol = 5e-2;
};

/// Scaled least-p fit of f(y) - f*(x) - a.(y-x) over shrinking balls:
/// closed-form normal equations at p = 2, iteratively reweighted least
/// squares otherwise. a_fit is the fit at the smallest radius; when the
/// scaled residuals converge to zero the fit is checked against the
/// ball-average limit of the finite-difference gradient (the averaging
/// route), which stays an independent code path.
struct ApproxDifferential {
    Point a_fit;
    std::vector<Point> a_per_radius;
    ConvergenceReport residuals;
    Point gradient_rep;
    bool identity_checked = false;
    bool identity_holds = false;
    double identity_gap = 0.0;
};

ApproxDifferential lp_approx_differential(const GridFunction& f, const Point& x, double p,
                                          const RadiusSchedule& sched,
                                          const ApproxDiffOptions& opts = {});

/// Fraction of ball measure where |f(y) - f*(x) - L(y-x)| / |y-x| exceeds
/// eps, per radius, with the moment bound fraction <= eps^-p * mean(D^p)
/// checked alongside (10% sampling slack).
struct DensityResult {
    std::vector<double> radii;
    std::vector<double> densities;
    std::vector<double> moment_bounds;
    bool bound_ok = true;
};

DensityResult density_test(const GridFunction& f, const Point& x, const FormalDifferential& diff,
                           double eps, const RadiusSchedule& sched, double p,
                           const RepOptions& ropts = {});

}  // namespace sobolev
