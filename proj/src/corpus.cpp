#include "sobolev/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sobolev/mollify.hpp"

namespace sobolev {

std::string_view to_string(Space s) {
    switch (s) {
        case Space::W1: return "W1";
        case Space::W2: return "W2";
        case Space::RW1: return "RW1";
        case Space::RW2: return "RW2";
    }
    return "W1";
}

bool CorpusEntry::supports_dim(int dim) const {
    return std::find(dims.begin(), dims.end(), dim) != dims.end();
}

std::optional<bool> CorpusEntry::membership(Space s, double p) const {
    for (const auto& m : memberships)
        if (m.space == s && m.p == p) return m.belongs;
    return std::nullopt;
}

std::vector<Point> CorpusEntry::exceptional(int dim) const {
    if (!exceptional_points) return {};
    return exceptional_points(dim);
}

namespace {

double sq_norm(const Point& y) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return s;
}

Point origin(int dim) { return Point(dim, 0.0); }

std::vector<Point> origin_only(int dim) { return {origin(dim)}; }

// Direction coefficients reused by the linear and polynomial entries.
constexpr double kA0 = 1.5, kA1 = -0.75, kA2 = 0.5;

double linear_eval(const Point& y) {
    static constexpr double a[3] = {kA0, kA1, kA2};
    double s = 0.25;
    for (std::size_t i = 0; i < y.size(); ++i) s += a[i] * y[i];
    return s;
}

Point linear_grad(const Point& y) {
    static constexpr double a[3] = {kA0, kA1, kA2};
    Point g(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) g[i] = a[i];
    return g;
}

// Small coefficients keep roundoff in the exactness suites near machine eps.
double poly1_eval(const Point& y) {
    double s = 0.25 + 0.5 * y[0];
    if (y.size() > 1) s -= 0.25 * y[1];
    if (y.size() > 2) s += 0.125 * y[2];
    return s;
}

Point poly1_grad(const Point& y) {
    Point g(y.size(), 0.0);
    g[0] = 0.5;
    if (y.size() > 1) g[1] = -0.25;
    if (y.size() > 2) g[2] = 0.125;
    return g;
}

double poly2_eval(const Point& y) {
    double s = poly1_eval(y) + 0.25 * y[0] * y[0];
    if (y.size() > 1) s += 0.125 * y[0] * y[1] - 0.0625 * y[1] * y[1];
    return s;
}

Point poly2_grad(const Point& y) {
    Point g = poly1_grad(y);
    g[0] += 0.5 * y[0];
    if (y.size() > 1) {
        g[0] += 0.125 * y[1];
        g[1] += 0.125 * y[0] - 0.125 * y[1];
    }
    return g;
}

double poly3_eval(const Point& y) {
    double s = poly2_eval(y) + 0.0625 * y[0] * y[0] * y[0];
    if (y.size() > 1) s += 0.03125 * y[0] * y[1] * y[1];
    return s;
}

Point poly3_grad(const Point& y) {
    Point g = poly2_grad(y);
    g[0] += 0.1875 * y[0] * y[0];
    if (y.size() > 1) {
        g[0] += 0.03125 * y[1] * y[1];
        g[1] += 0.0625 * y[0] * y[1];
    }
    return g;
}

std::vector<MembershipClaim> smooth_claims() {
    std::vector<MembershipClaim> out;
    for (double p : {1.0, 2.0, 4.0})
        for (Space s : {Space::W1, Space::W2, Space::RW1, Space::RW2})
            out.push_back({s, p, true});
    return out;
}

const std::map<std::string, CorpusEntry>& registry() {
    static const std::map<std::string, CorpusEntry> entries = [] {
        std::map<std::string, CorpusEntry> reg;
        auto add = [&reg](CorpusEntry e) { reg.emplace(e.id, std::move(e)); };

        add({.id = "const_1",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = [](const Point&) { return 1.0; },
             .gradient = [](const Point& y) { return Point(y.size(), 0.0); },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        add({.id = "abs_1d",
             .dims = {1},
             .smoothness = "lipschitz",
             .value = [](const Point& y) { return std::abs(y[0]); },
             .gradient = [](const Point& y) { return Point{y[0] > 0 ? 1.0 : (y[0] < 0 ? -1.0 : 0.0)}; },
             .memberships = {{Space::W1, 1.0, true},
                             {Space::W1, 2.0, true},
                             {Space::W1, 4.0, true},
                             {Space::RW1, 2.0, false},
                             {Space::RW1, 4.0, false},
                             {Space::W2, 1.0, false}},
             .exceptional_points = origin_only});

        add({.id = "abs_nd",
             .dims = {2, 3},
             .smoothness = "lipschitz",
             .value = [](const Point& y) { return std::sqrt(sq_norm(y)); },
             .gradient =
                 [](const Point& y) {
                     const double r = std::sqrt(sq_norm(y));
                     Point g(y.size(), 0.0);
                     if (r > 0.0)
                         for (std::size_t i = 0; i < y.size(); ++i) g[i] = y[i] / r;
                     return g;
                 },
             .memberships = {{Space::W1, 1.0, true},
                             {Space::W1, 2.0, true},
                             {Space::RW1, 1.0, true},
                             {Space::W2, 1.0, false}},
             .exceptional_points = origin_only});

        add({.id = "gauss",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = [](const Point& y) { return std::exp(-sq_norm(y)); },
             .gradient =
                 [](const Point& y) {
                     const double e = std::exp(-sq_norm(y));
                     Point g(y.size());
                     for (std::size_t i = 0; i < y.size(); ++i) g[i] = -2.0 * y[i] * e;
                     return g;
                 },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        add({.id = "linear",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = linear_eval,
             .gradient = linear_grad,
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        add({.id = "quadratic",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = sq_norm,
             .gradient =
                 [](const Point& y) {
                     Point g(y.size());
                     for (std::size_t i = 0; i < y.size(); ++i) g[i] = 2.0 * y[i];
                     return g;
                 },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        // y|y|: C^1 but not C^2; second derivative jumps at the origin.
        add({.id = "cubic_kink",
             .dims = {1},
             .smoothness = "C1",
             .value = [](const Point& y) { return y[0] * std::abs(y[0]); },
             .gradient = [](const Point& y) { return Point{2.0 * std::abs(y[0])}; },
             .memberships = {{Space::W1, 1.0, true},
                             {Space::W1, 2.0, true},
                             {Space::W2, 2.0, true},
                             {Space::RW1, 1.0, true},
                             {Space::RW1, 2.0, true},
                             {Space::RW1, 4.0, true},
                             {Space::RW2, 2.0, false},
                             {Space::RW2, 4.0, false}},
             .exceptional_points = origin_only});

        add({.id = "poly_1",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = poly1_eval,
             .gradient = poly1_grad,
             .memberships = smooth_claims(),
             .exceptional_points = {}});
        add({.id = "poly_2",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = poly2_eval,
             .gradient = poly2_grad,
             .memberships = smooth_claims(),
             .exceptional_points = {}});
        add({.id = "poly_3",
             .dims = {1, 2, 3},
             .smoothness = "Cinf",
             .value = poly3_eval,
             .gradient = poly3_grad,
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        add({.id = "bump",
             .dims = {1, 2},
             .smoothness = "Cinf",
             .value = [](const Point& y) { return bump_value(static_cast<int>(y.size()), y); },
             .gradient = [](const Point& y) { return bump_gradient(static_cast<int>(y.size()), y); },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        add({.id = "exp1",
             .dims = {1, 2},
             .smoothness = "Cinf",
             .value = [](const Point& y) { return std::exp(y[0]); },
             .gradient =
                 [](const Point& y) {
                     Point g(y.size(), 0.0);
                     g[0] = std::exp(y[0]);
                     return g;
                 },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        // Bounded product pairs for the algebra and Leibniz suites.
        add({.id = "gauss_times_quadratic",
             .dims = {1, 2},
             .smoothness = "Cinf",
             .value = [](const Point& y) { return std::exp(-sq_norm(y)) * sq_norm(y); },
             .gradient =
                 [](const Point& y) {
                     const double e = std::exp(-sq_norm(y));
                     const double q = sq_norm(y);
                     Point g(y.size());
                     for (std::size_t i = 0; i < y.size(); ++i)
                         g[i] = e * (2.0 * y[i]) + q * (-2.0 * y[i] * e);
                     return g;
                 },
             .memberships = smooth_claims(),
             .exceptional_points = {}});
        add({.id = "gauss_times_linear",
             .dims = {1, 2},
             .smoothness = "Cinf",
             .value = [](const Point& y) { return std::exp(-sq_norm(y)) * linear_eval(y); },
             .gradient =
                 [](const Point& y) {
                     const double e = std::exp(-sq_norm(y));
                     const double l = linear_eval(y);
                     Point g = linear_grad(y);
                     for (std::size_t i = 0; i < y.size(); ++i)
                         g[i] = e * g[i] + l * (-2.0 * y[i] * e);
                     return g;
                 },
             .memberships = smooth_claims(),
             .exceptional_points = {}});

        return reg;
    }();
    return entries;
}

}  // namespace

const CorpusEntry& corpus_get(const std::string& id) {
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end()) throw lookup_error("unknown corpus function: " + id);
    return it->second;
}

std::vector<std::string> corpus_ids() {
    std::vector<std::string> out;
    for (const auto& [id, entry] : registry()) out.push_back(id);
    return out;
}

bool annotations_consistent(const CorpusEntry& entry, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = entry.id + ": " + msg;
        return false;
    };
    for (const auto& m : entry.memberships) {
        if (!(m.p >= 1.0)) return fail("membership exponent below 1");
        auto implies = [&](Space from, Space to) {
            if (m.space != from || !m.belongs) return true;
            auto target = entry.membership(to, m.p);
            return !target.has_value() || *target;
        };
        if (!implies(Space::W2, Space::RW1)) return fail("in W2 but not in RW1");
        if (!implies(Space::W2, Space::W1)) return fail("in W2 but not in W1");
        if (!implies(Space::RW1, Space::W1)) return fail("in RW1 but not in W1");
        if (!implies(Space::RW2, Space::W2)) return fail("in RW2 but not in W2");
        if (!implies(Space::RW2, Space::RW1)) return fail("in RW2 but not in RW1");
    }
    return true;
}

GridFunction sample(const std::string& id, const Grid& g) {
    const CorpusEntry& entry = corpus_get(id);
    if (!entry.supports_dim(g.dim()))
        throw lookup_error("corpus function " + id + " does not support dimension " +
                           std::to_string(g.dim()));
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = entry.value(g.coords(i));
    return {g, std::move(v)};
}

VectorField sample_gradient(const std::string& id, const Grid& g) {
    const CorpusEntry& entry = corpus_get(id);
    if (!entry.supports_dim(g.dim()))
        throw lookup_error("corpus function " + id + " does not support dimension " +
                           std::to_string(g.dim()));
    if (!entry.gradient) throw lookup_error("corpus function " + id + " has no analytic gradient");
    const int n = g.dim();
    std::vector<double> v(g.size() * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Point grad = entry.gradient(g.coords(i));
        for (int c = 0; c < n; ++c)
            v[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(c)] = grad[c];
    }
    return {g, std::move(v)};
}

}  // namespace sobolev
