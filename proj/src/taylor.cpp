#include "sobolev/taylor.hpp"

#include <algorithm>
#include <cmath>

#include "sobolev/interpolate.hpp"

namespace sobolev {

int MultiIndex::total() const {
    int s = 0;
    for (int v : orders) s += v;
    return s;
}

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int v : orders)
        for (int i = 2; i <= v; ++i) f *= i;
    return f;
}

double MultiIndex::power(const Point& z) const {
    double v = 1.0;
    for (std::size_t a = 0; a < orders.size(); ++a)
        for (int i = 0; i < orders[a]; ++i) v *= z[a];
    return v;
}

std::vector<MultiIndex> multi_indices(int dim, int max_total) {
    std::vector<MultiIndex> out;
    for (auto& o : derivative_orders(dim, max_total)) out.push_back({std::move(o)});
    return out;
}

bool TaylorData::all_converged() const {
    for (auto c : converged)
        if (!c) return false;
    return true;
}

double TaylorData::polynomial_at_displacement(const Point& d) const {
    double s = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        s += coefficients[i] / alphas[i].factorial() * alphas[i].power(d);
    return s;
}

TaylorData taylor_data(const GridFunction& f, const Point& x, int k, double p,
                       const RadiusSchedule& sched, const RepOptions& opts) {
    if (k < 0 || k > 3) throw domain_error("taylor data: supported orders are 0..3");
    TaylorData data;
    data.x = x;
    data.order = k;
    data.alphas = multi_indices(f.grid().dim(), k);
    for (const MultiIndex& alpha : data.alphas) {
        const GridFunction field = partial_derivative(f, alpha.orders);
        const RepResult rep = precise_rep(field, x, sched, opts);
        // the 0-default of a failed limit is recorded, flagged by `converged`
        data.coefficients.push_back(rep.estimate[0]);
        data.converged.push_back(rep.converged ? 1 : 0);
        data.final_deviations.push_back(
            lp_deviation(field, x, sched.smallest(), p, rep.estimate[0]));
    }
    return data;
}

GridFunction taylor_remainder(const GridFunction& f, const TaylorData& data, double h,
                              const Region& v_region, const QuotientOptions& opts) {
    const Grid& g = f.grid();
    if (!(h > 0.0)) throw domain_error("remainder: h must be positive");
    const Grid lattice =
        reference_lattice(v_region, opts.nodes_per_axis,
                          std::max(opts.inset_stencils, data.order));
    const double slack = 1e-9 * g.max_spacing();
    for (int a = 0; a < g.dim(); ++a) {
        if (data.x[a] + h * lattice.lower(a) < g.lower(a) - slack ||
            data.x[a] + h * lattice.upper(a) > g.upper(a) + slack)
            throw domain_error("remainder: x + h V leaves the domain");
    }
    std::vector<double> values(lattice.size());
    Point y(g.dim()), d(g.dim());
    for (std::size_t node = 0; node < lattice.size(); ++node) {
        const Point z = lattice.coords(node);
        for (int a = 0; a < g.dim(); ++a) {
            d[a] = h * z[a];
            y[a] = data.x[a] + d[a];
        }
        values[node] = interpolate(f, y) - data.polynomial_at_displacement(d);
    }
    return {lattice, std::move(values)};
}

double integral_remainder(const GridFunction& f, const Point& x, int k, double h,
                          const Point& z) {
    if (k < 1 || k > 3) throw domain_error("integral remainder: supported orders are 1..3");
    const Grid& g = f.grid();
    const int n = g.dim();
    double total = 0.0;
    Point y(n);
    for (const MultiIndex& alpha : multi_indices(n, k)) {
        if (alpha.total() != k) continue;
        const GridFunction field = partial_derivative(f, alpha.orders);
        const double at_x = interpolate(field, x);
        // 64-panel composite Simpson over the segment parameter.
        const int panels = 64;
        const double dt = 1.0 / panels;
        double integral = 0.0;
        for (int i = 0; i <= panels; ++i) {
            const double t = i * dt;
            for (int a = 0; a < n; ++a) y[a] = x[a] + t * h * z[a];
            const double integrand =
                std::pow(1.0 - t, k - 1) * (interpolate(field, y) - at_x);
            const double coef = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            integral += coef * integrand;
        }
        integral *= dt / 3.0;
        total += alpha.power(z) / alpha.factorial() * integral;
    }
    return k * std::pow(h, k) * total;
}

RemainderStudy remainder_study(const GridFunction& f, const Point& x, int k, double p,
                               const Region& v_region, std::span<const double> h_schedule,
                               const RadiusSchedule& rsched, const QuotientOptions& qopts,
                               const ConvergenceOptions& copts, const RepOptions& ropts) {
    RemainderStudy study;
    study.data = taylor_data(f, x, k, p, rsched, ropts);
    std::vector<double> errors;
    for (double h : h_schedule) {
        const GridFunction rem = taylor_remainder(f, study.data, h, v_region, qopts);
        errors.push_back(wkp_norm(std::pow(h, -k) * rem, k, p, v_region));
    }
    study.report =
        assess_convergence({h_schedule.begin(), h_schedule.end()}, std::move(errors), copts);
    if (!study.data.all_converged()) study.report.verdict = Verdict::Inconclusive;
    return study;
}

}  // namespace sobolev
