#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sobolev/convergence.hpp"
#include "sobolev/differentiability.hpp"
#include "sobolev/grid.hpp"
#include "sobolev/representative.hpp"

namespace sobolev {

struct MultiIndex {
    std::vector<int> orders;

    int total() const;
    double factorial() const;
    double power(const Point& z) const;
};

/// All multi-indices with |alpha| <= max_total, by total then lexicographic.
std::vector<MultiIndex> multi_indices(int dim, int max_total);

/// Coefficients (ball-average limits of the nested finite-difference
/// derivatives) for the degree-k polynomial expansion at x. A failed
/// convergence flag is carried in the data, not thrown: the points where
/// coefficients fail are the subject matter, and studies over such data
/// report Inconclusive instead of guessing.
struct TaylorData {
    Point x;
    int order = 0;
    std::vector<MultiIndex> alphas;
    std::vector<double> coefficients;
    std::vector<std::uint8_t> converged;
    std::vector<double> final_deviations;  // L_p deviation at the smallest radius

    bool all_converged() const;
    double polynomial_at_displacement(const Point& d) const;
};

/// Supported derivative order is k <= 3: nested central differences lose
/// about two digits per order, and beyond that the signal drowns at desk
/// grid sizes.
TaylorData taylor_data(const GridFunction& f, const Point& x, int k, double p,
                       const RadiusSchedule& sched, const RepOptions& opts = {});

/// z -> f(x + h z) - sum_{|a|<=k} coeff(a)/a! (h z)^a on V's reference
/// lattice, with f evaluated by cubic interpolation.
GridFunction taylor_remainder(const GridFunction& f, const TaylorData& data, double h,
                              const Region& v_region, const QuotientOptions& opts = {});

/// k h^k sum_{|a|=k} z^a/a! int_0^1 (1-t)^(k-1) (D^a f(x+thz) - D^a f(x)) dt
/// by 64-panel composite Simpson on the interpolated derivative fields.
double integral_remainder(const GridFunction& f, const Point& x, int k, double h, const Point& z);

struct RemainderStudy {
    TaylorData data;
    ConvergenceReport report;
};

/// error(h) = order-k norm of h^-k R over V; Inconclusive whenever some
/// coefficient failed to converge.
RemainderStudy remainder_study(const GridFunction& f, const Point& x, int k, double p,
                               const Region& v_region, std::span<const double> h_schedule,
                               const RadiusSchedule& rsched, const QuotientOptions& qopts = {},
                               const ConvergenceOptions& copts = {}, const RepOptions& ropts = {});

}  // namespace sobolev
