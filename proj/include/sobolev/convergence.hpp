#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "sobolev/errors.hpp"

namespace sobolev {

/// Least-squares slope of log(y) against log(x), using only pairs with
/// y > floor. Returns +infinity when fewer than two pairs survive (the
/// sequence sits on the numerical floor).
double fit_loglog_slope(std::span<const double> xs, std::span<const double> ys,
                        double floor = 0.0);

std::vector<double> geometric_schedule(double first, double ratio, int count);

enum class Verdict { ConvergesToZero, Stalls, Inconclusive };
std::string_view to_string(Verdict v);

struct ConvergenceOptions {
    double conv_tol = 1e-2;     // last error below this to declare convergence
    double slope_min = 0.5;     // and fitted slope above this
    double stall_slope = 0.1;   // flat-or-growing threshold for a stall
    double error_floor = 1e-9;  // errors at or below are treated as numerically zero
};

/// (parameter, error) pairs for a t->0 / h->0 / r->0 study plus the
/// fitted log-log slope and a verdict. Parameters decrease geometrically;
/// errors are nonnegative; a ConvergesToZero verdict implies the last
/// error is below conv_tol and the slope exceeds slope_min.
struct ConvergenceReport {
    std::vector<double> parameters;
    std::vector<double> errors;
    double slope = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    ConvergenceOptions options;
};

ConvergenceReport assess_convergence(std::vector<double> parameters, std::vector<double> errors,
                                     const ConvergenceOptions& opts = {});

}  // namespace sobolev
