#include "sobolev/representative.hpp"

#include <algorithm>
#include <cmath>

#include "sobolev/parallel.hpp"

namespace sobolev {

std::vector<double> RadiusSchedule::radii() const {
    return geometric_schedule(r0, ratio, count);
}

double RadiusSchedule::smallest() const { return r0 * std::pow(ratio, count - 1); }

void RadiusSchedule::validate(const Grid& g) const {
    if (!(r0 > 0.0)) throw domain_error("radius schedule: r0 must be positive");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw domain_error("radius schedule: ratio must lie in (0,1)");
    if (count < 4) throw domain_error("radius schedule: need at least 4 radii");
    if (smallest() < 3.0 * g.max_spacing())
        throw resolution_error("radius schedule: smallest radius under 3 grid spacings");
}

namespace {

// Extrapolates a_j = a_inf + c r_j^beta from the last four terms. The
// exponent beta comes from a log-space least-squares fit of successive
// differences; a flat tail or a non-decaying fit falls back to the last
// average.
double extrapolate_tail(std::span<const double> radii, std::span<const double> a, double ratio) {
    const std::size_t m = a.size();
    const double scale = 1.0 + std::abs(a[m - 1]);
    double d[3];
    double r[3];
    for (int i = 0; i < 3; ++i) {
        d[i] = a[m - 4 + i + 1] - a[m - 4 + i];
        r[i] = radii[m - 4 + i];
    }
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::abs(v));
    if (dmax < 1e-14 * scale) return a[m - 1];
    bool same_sign = (d[0] > 0) == (d[1] > 0) && (d[1] > 0) == (d[2] > 0);
    if (!same_sign || d[0] == 0.0 || d[1] == 0.0 || d[2] == 0.0) return a[m - 1];

    double lx[3], ly[3], mx = 0.0, my = 0.0;
    for (int i = 0; i < 3; ++i) {
        lx[i] = std::log(r[i]);
        ly[i] = std::log(std::abs(d[i]));
        mx += lx[i] / 3.0;
        my += ly[i] / 3.0;
    }
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < 3; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    const double beta = sxy / sxx;
    if (!(beta > 0.05 && beta < 8.0)) return a[m - 1];
    const double q = std::pow(ratio, beta);
    return a[m - 1] + (a[m - 1] - a[m - 2]) * q / (1.0 - q);
}

RepResult rep_from_averages(std::vector<Point> averages, std::span<const double> radii,
                            double ratio, const RepOptions& opts) {
    const std::size_t m = averages.size();
    const std::size_t nc = averages[0].size();
    RepResult out;
    out.estimate.resize(nc);
    std::vector<double> comp(m);
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t j = 0; j < m; ++j) comp[j] = averages[j][c];
        out.estimate[c] = extrapolate_tail(radii, comp, ratio);
    }
    const double last = euclidean_norm(averages[m - 1]);
    const double step = euclidean_distance(averages[m - 1], averages[m - 2]);
    out.converged = step < opts.rep_tol * (1.0 + last);
    if (!out.converged) out.estimate.assign(nc, 0.0);
    out.averages = std::move(averages);
    return out;
}

}  // namespace

RepResult precise_rep(const GridFunction& f, const Point& x, const RadiusSchedule& sched,
                      const RepOptions& opts) {
    sched.validate(f.grid());
    const auto radii = sched.radii();
    std::vector<Point> averages;
    averages.reserve(radii.size());
    for (double r : radii) averages.push_back({ball_average(f, x, r)});
    return rep_from_averages(std::move(averages), radii, sched.ratio, opts);
}

RepResult precise_rep(const VectorField& v, const Point& x, const RadiusSchedule& sched,
                      const RepOptions& opts) {
    sched.validate(v.grid());
    const auto radii = sched.radii();
    std::vector<Point> averages;
    averages.reserve(radii.size());
    for (double r : radii) averages.push_back(ball_average(v, x, r));
    return rep_from_averages(std::move(averages), radii, sched.ratio, opts);
}

double lp_deviation(const GridFunction& f, const Point& x, double r, double p, double center) {
    return ball_deviation(f, x, r, center, p);
}

double lp_deviation(const VectorField& v, const Point& x, double r, double p,
                    const Point& center) {
    return ball_deviation(v, x, r, center, p);
}

std::string_view to_string(PointVerdict v) {
    switch (v) {
        case PointVerdict::LpPoint: return "LpPoint";
        case PointVerdict::NotLpPoint: return "NotLpPoint";
        case PointVerdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

namespace {

PointClassification classify_impl(const RepResult& rep, std::vector<double> radii,
                                  std::vector<double> deviations, const ClassifyOptions& opts) {
    PointClassification out;
    out.representative = rep.estimate;
    out.rep_converged = rep.converged;
    out.slope = fit_loglog_slope(radii, deviations, 1e-14);

    const std::size_t m = deviations.size();
    const double last = deviations[m - 1];
    double tail_min = deviations[m - 1];
    for (std::size_t j = m - 3; j < m; ++j) tail_min = std::min(tail_min, deviations[j]);
    if (last < opts.lp_tol)
        out.verdict = PointVerdict::LpPoint;
    else if (tail_min > opts.not_tol)
        out.verdict = PointVerdict::NotLpPoint;
    else
        out.verdict = PointVerdict::Inconclusive;
    out.radii = std::move(radii);
    out.deviations = std::move(deviations);
    return out;
}

}  // namespace

PointClassification classify_lp_point(const GridFunction& f, const Point& x, double p,
                                      const RadiusSchedule& sched, const ClassifyOptions& opts) {
    const RepResult rep = precise_rep(f, x, sched, opts.rep);
    auto radii = sched.radii();
    std::vector<double> dev;
    dev.reserve(radii.size());
    for (double r : radii) dev.push_back(lp_deviation(f, x, r, p, rep.estimate[0]));
    return classify_impl(rep, std::move(radii), std::move(dev), opts);
}

PointClassification classify_lp_point(const VectorField& v, const Point& x, double p,
                                      const RadiusSchedule& sched, const ClassifyOptions& opts) {
    const RepResult rep = precise_rep(v, x, sched, opts.rep);
    auto radii = sched.radii();
    std::vector<double> dev;
    dev.reserve(radii.size());
    for (double r : radii) dev.push_back(lp_deviation(v, x, r, p, rep.estimate));
    return classify_impl(rep, std::move(radii), std::move(dev), opts);
}

RefinedGradientReport classify_refined_gradient(const GridFunction& f, double p,
                                                std::span<const Point> points, int k,
                                                const RadiusSchedule& sched,
                                                const ClassifyOptions& opts, bool include_lower,
                                                int jobs) {
    if (k < 1) throw domain_error("refined gradient classification needs order k >= 1");
    const int n = f.grid().dim();
    std::vector<std::vector<int>> orders;
    for (const auto& o : derivative_orders(n, k)) {
        int total = 0;
        for (int v : o) total += v;
        if (total == k || (include_lower && total < k)) orders.push_back(o);
    }

    // Derivative fields are shared across points; classification per
    // (point, order) is independent.
    std::vector<GridFunction> fields;
    fields.reserve(orders.size());
    for (const auto& o : orders) fields.push_back(partial_derivative(f, o));

    RefinedGradientReport report;
    report.rows.resize(points.size() * orders.size());
    parallel_for(report.rows.size(), jobs, [&](std::size_t task) {
        const std::size_t pi = task / orders.size();
        const std::size_t oi = task % orders.size();
        report.rows[task] = {points[pi], orders[oi],
                             classify_lp_point(fields[oi], points[pi], p, sched, opts)};
    });

    std::size_t failing = 0;
    for (std::size_t pi = 0; pi < points.size(); ++pi) {
        RefinedGradientReport::PointSummary s;
        s.x = points[pi];
        s.verdict = PointVerdict::LpPoint;
        s.gradient_estimate.assign(n, 0.0);
        for (std::size_t oi = 0; oi < orders.size(); ++oi) {
            const auto& row = report.rows[pi * orders.size() + oi];
            if (row.cls.verdict == PointVerdict::NotLpPoint)
                s.verdict = PointVerdict::NotLpPoint;
            else if (row.cls.verdict == PointVerdict::Inconclusive &&
                     s.verdict == PointVerdict::LpPoint)
                s.verdict = PointVerdict::Inconclusive;
            int total = 0, axis = -1;
            for (int a = 0; a < n; ++a) {
                total += row.orders[a];
                if (row.orders[a] == 1) axis = a;
            }
            if (total == 1 && axis >= 0) s.gradient_estimate[axis] = row.cls.representative[0];
        }
        if (s.verdict == PointVerdict::NotLpPoint) {
            report.exceptional.push_back(pi);
            ++failing;
        }
        report.points.push_back(std::move(s));
    }
    report.failing_fraction =
        points.empty() ? 0.0 : static_cast<double>(failing) / static_cast<double>(points.size());
    return report;
}

}  // namespace sobolev
