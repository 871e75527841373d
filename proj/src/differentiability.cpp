#include "sobolev/differentiability.hpp"

#include <algorithm>
#include <cmath>

#include "sobolev/detail/smallsolve.hpp"

namespace sobolev {

FormalDifferential formal_differential(const GridFunction& f, const Point& x,
                                       const RadiusSchedule& sched, const RepOptions& opts) {
    const RepResult rep = precise_rep(gradient_fd(f), x, sched, opts);
    if (!rep.converged)
        throw domain_error("formal differential: gradient averages do not converge here");
    return {x, rep.estimate};
}

namespace {

double bbox_diam(const Region& region) {
    Box bbox;
    if (const auto* ball = std::get_if<Ball>(&region)) {
        const int n = static_cast<int>(ball->center.size());
        bbox.lo.resize(n);
        bbox.hi.resize(n);
        for (int a = 0; a < n; ++a) {
            bbox.lo[a] = ball->center[a] - ball->radius;
            bbox.hi[a] = ball->center[a] + ball->radius;
        }
    } else if (const auto* box = std::get_if<Box>(&region)) {
        bbox = *box;
    } else {
        throw domain_error("difference quotient: region must be a ball or a box");
    }
    double d2 = 0.0;
    for (std::size_t a = 0; a < bbox.lo.size(); ++a)
        d2 += (bbox.hi[a] - bbox.lo[a]) * (bbox.hi[a] - bbox.lo[a]);
    return std::sqrt(d2);
}

}  // namespace

GridFunction difference_quotient(const GridFunction& f, const Point& x, double t,
                                 const Region& u_region, const QuotientOptions& opts) {
    const Grid& g = f.grid();
    if (!(t > 0.0)) throw domain_error("difference quotient: t must be positive");
    if (t * bbox_diam(u_region) < 2.0 * g.max_spacing())
        throw domain_error("difference quotient: t too small to resolve on the source grid");
    const Grid lattice = reference_lattice(u_region, opts.nodes_per_axis, opts.inset_stencils);
    const double slack = 1e-9 * g.max_spacing();
    for (int a = 0; a < g.dim(); ++a) {
        if (x[a] + t * lattice.lower(a) < g.lower(a) - slack ||
            x[a] + t * lattice.upper(a) > g.upper(a) + slack)
            throw domain_error("difference quotient: x + t U leaves the domain");
    }

    const double fx = interpolate(f, x);
    std::vector<double> values(lattice.size());
    Point y(g.dim());
    for (std::size_t node = 0; node < lattice.size(); ++node) {
        const Point z = lattice.coords(node);
        for (int a = 0; a < g.dim(); ++a) y[a] = x[a] + t * z[a];
        values[node] = (interpolate(f, y) - fx) / t;
    }
    return {lattice, std::move(values)};
}

W1pError diffquot_w1p_error(const GridFunction& f, const Point& x, double t, double p,
                            const Region& u_region, const FormalDifferential& diff,
                            const QuotientOptions& opts) {
    const GridFunction quotient = difference_quotient(f, x, t, u_region, opts);
    const Grid& lattice = quotient.grid();
    std::vector<double> values(lattice.size());
    for (std::size_t node = 0; node < lattice.size(); ++node) {
        const Point z = lattice.coords(node);
        double lin = 0.0;
        for (int a = 0; a < lattice.dim(); ++a) lin += diff.a[a] * z[a];
        values[node] = quotient[node] - lin;
    }
    const GridFunction residue(lattice, std::move(values));

    W1pError err;
    err.value_part = lp_norm(residue, p, u_region);
    for (int a = 0; a < lattice.dim(); ++a)
        err.grad_part += lp_norm(axis_derivative(residue, a), p, u_region);
    err.total = err.value_part + err.grad_part;
    return err;
}

DiffQuotStudy diffquot_study(const GridFunction& f, const Point& x, double p,
                             const Region& u_region, std::span<const double> t_schedule,
                             const RadiusSchedule& rsched, const QuotientOptions& qopts,
                             const ConvergenceOptions& copts, const RepOptions& ropts) {
    DiffQuotStudy study;
    study.differential = formal_differential(f, x, rsched, ropts);
    std::vector<double> errors;
    for (double t : t_schedule) {
        study.parts.push_back(diffquot_w1p_error(f, x, t, p, u_region, study.differential, qopts));
        errors.push_back(study.parts.back().total);
    }
    study.report = assess_convergence({t_schedule.begin(), t_schedule.end()}, std::move(errors),
                                      copts);
    return study;
}

namespace {

// Weighted least-p linear fit of targets against displacements; p = 2 is
// one normal-equations solve, otherwise damped IRLS around it.
Point fit_linear(const std::vector<Point>& disp, const std::vector<double>& target,
                 const std::vector<double>& weight, double p, RegressionInit init,
                 int max_iter) {
    const int n = static_cast<int>(disp.front().size());
    auto solve_weighted = [&](const std::vector<double>& w) {
        std::vector<double> ata(static_cast<std::size_t>(n) * n, 0.0), atb(n, 0.0);
        for (std::size_t i = 0; i < disp.size(); ++i) {
            for (int r = 0; r < n; ++r) {
                atb[r] += w[i] * disp[i][r] * target[i];
                for (int c = 0; c < n; ++c) ata[r * n + c] += w[i] * disp[i][r] * disp[i][c];
            }
        }
        return detail::solve_dense(std::move(ata), std::move(atb));
    };

    if (p == 2.0) return solve_weighted(weight);

    Point a(n, 0.0);
    if (init == RegressionInit::FromLeastSquares) a = solve_weighted(weight);
    double scale = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) scale += weight[i] * target[i] * target[i];
    scale = std::sqrt(scale / target.size());
    const double floor = std::max(1e-9 * (scale + 1e-30), 1e-300);

    std::vector<double> w(weight.size());
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t i = 0; i < disp.size(); ++i) {
            double res = target[i];
            for (int c = 0; c < n; ++c) res -= a[c] * disp[i][c];
            w[i] = weight[i] * std::pow(std::max(std::abs(res), floor), p - 2.0);
        }
        const Point next = solve_weighted(w);
        double delta = 0.0, norm = 0.0;
        Point blended(n);
        for (int c = 0; c < n; ++c) {
            blended[c] = 0.5 * a[c] + 0.5 * next[c];
            delta += (blended[c] - a[c]) * (blended[c] - a[c]);
            norm += blended[c] * blended[c];
        }
        a = blended;
        if (std::sqrt(delta) < 1e-12 * (1.0 + std::sqrt(norm))) break;
    }
    return a;
}

}  // namespace

ApproxDifferential lp_approx_differential(const GridFunction& f, const Point& x, double p,
                                          const RadiusSchedule& sched,
                                          const ApproxDiffOptions& opts) {
    const Grid& g = f.grid();
    const RepResult rep = precise_rep(f, x, sched, opts.rep);
    if (!rep.converged)
        throw domain_error("approximate differential: ball averages do not converge here");
    const double fstar = rep.estimate[0];

    ApproxDifferential out;
    const auto radii = sched.radii();
    std::vector<double> residuals;
    for (double r : radii) {
        const auto wts = region_weights(g, Ball{x, r});
        if (wts.empty()) throw domain_error("approximate differential: empty ball");
        std::vector<Point> disp;
        std::vector<double> target, weight;
        disp.reserve(wts.size());
        for (const auto& [node, w] : wts) {
            Point d = g.coords(node);
            for (int a = 0; a < g.dim(); ++a) d[a] -= x[a];
            disp.push_back(std::move(d));
            target.push_back(f[node] - fstar);
            weight.push_back(w);
        }
        const Point a = fit_linear(disp, target, weight, p, opts.init, opts.irls_max_iter);
        double num = 0.0, vol = 0.0;
        for (std::size_t i = 0; i < disp.size(); ++i) {
            double res = target[i];
            for (int c = 0; c < g.dim(); ++c) res -= a[c] * disp[i][c];
            num += weight[i] * std::pow(std::abs(res), p);
            vol += weight[i];
        }
        residuals.push_back(num / vol / std::pow(r, p));
        out.a_per_radius.push_back(a);
    }
    out.a_fit = out.a_per_radius.back();
    out.residuals = assess_convergence(radii, std::move(residuals), opts.conv);

    if (out.residuals.verdict == Verdict::ConvergesToZero) {
        const RepResult grad = precise_rep(gradient_fd(f), x, sched, opts.rep);
        out.gradient_rep = grad.estimate;
        out.identity_checked = true;
        out.identity_gap = euclidean_distance(out.a_fit, grad.estimate);
        out.identity_holds = grad.converged && out.identity_gap < opts.identity_tol;
    }
    return out;
}

DensityResult density_test(const GridFunction& f, const Point& x, const FormalDifferential& diff,
                           double eps, const RadiusSchedule& sched, double p,
                           const RepOptions& ropts) {
    if (!(eps > 0.0)) throw domain_error("density test: eps must be positive");
    const Grid& g = f.grid();
    const RepResult rep = precise_rep(f, x, sched, ropts);
    if (!rep.converged)
        throw domain_error("density test: ball averages do not converge here");
    const double fstar = rep.estimate[0];

    DensityResult out;
    out.radii = sched.radii();
    for (double r : out.radii) {
        double vol = 0.0, above = 0.0, moment = 0.0;
        for (const auto& [node, w] : region_weights(g, Ball{x, r})) {
            Point y = g.coords(node);
            double dist2 = 0.0, lin = 0.0;
            for (int a = 0; a < g.dim(); ++a) {
                const double d = y[a] - x[a];
                dist2 += d * d;
                lin += diff.a[a] * d;
            }
            if (dist2 == 0.0) continue;  // the base point itself
            const double dist = std::sqrt(dist2);
            const double dev = std::abs(f[node] - fstar - lin) / dist;
            vol += w;
            if (dev > eps) above += w;
            moment += w * std::pow(dev, p);
        }
        if (vol <= 0.0) throw domain_error("density test: empty ball");
        const double density = above / vol;
        const double bound = moment / vol / std::pow(eps, p);
        out.densities.push_back(density);
        out.moment_bounds.push_back(bound);
        if (density > 1.1 * bound + 1e-12) out.bound_ok = false;
    }
    return out;
}

}  // namespace sobolev
