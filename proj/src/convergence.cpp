#include "sobolev/convergence.hpp"

#include <cmath>
#include <limits>

namespace sobolev {

double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys, double floor) {
    if (xs.size() != ys.size()) throw domain_error("slope fit: sequence length mismatch");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0)) throw domain_error("slope fit: parameters must be positive");
        if (ys[i] > floor) {
            lx.push_back(std::log(xs[i]));
            ly.push_back(std::log(ys[i]));
        }
    }
    if (lx.size() < 2) return std::numeric_limits<double>::infinity();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= lx.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw domain_error("slope fit: parameters are all equal");
    return sxy / sxx;
}

std::vector<double> geometric_schedule(double first, double ratio, int count) {
    if (!(first > 0.0)) throw domain_error("schedule: first term must be positive");
    if (!(ratio > 0.0 && ratio < 1.0)) throw domain_error("schedule: ratio must lie in (0,1)");
    if (count < 1) throw domain_error("schedule: count must be positive");
    std::vector<double> out(count);
    double v = first;
    for (int i = 0; i < count; ++i) {
        out[i] = v;
        v *= ratio;
    }
    return out;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::ConvergesToZero: return "ConvergesToZero";
        case Verdict::Stalls: return "Stalls";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

ConvergenceReport assess_convergence(std::vector<double> parameters, std::vector<double> errors,
                                     const ConvergenceOptions& opts) {
    if (parameters.size() != errors.size())
        throw domain_error("convergence report: sequence length mismatch");
    if (parameters.size() < 4) throw domain_error("convergence report: need at least 4 terms");
    for (double e : errors)
        if (!(e >= 0.0)) throw domain_error("convergence report: negative error");

    ConvergenceReport rep;
    rep.options = opts;
    rep.slope = fit_loglog_slope(parameters, errors, opts.error_floor);
    const double last = errors.back();
    if (last < opts.conv_tol && rep.slope > opts.slope_min)
        rep.verdict = Verdict::ConvergesToZero;
    else if (last >= opts.conv_tol && rep.slope <= opts.stall_slope)
        rep.verdict = Verdict::Stalls;
    else
        rep.verdict = Verdict::Inconclusive;
    rep.parameters = std::move(parameters);
    rep.errors = std::move(errors);
    return rep;
}

}  // namespace sobolev
