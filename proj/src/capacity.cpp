#include "sobolev/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sobolev/convergence.hpp"

namespace sobolev {

double CondenserProblem::smoothing() const {
    if (delta >= 0.0) return delta;
    return p < 2.0 ? grid.max_spacing() : 0.0;
}

void CondenserProblem::validate() const {
    if (in_k.size() != grid.size() || in_omega.size() != grid.size())
        throw domain_error("condenser: mask length does not match grid");
    if (!(p >= 1.0)) throw domain_error("condenser: p must be >= 1");
    bool omega_any = false;
    for (auto v : in_omega) omega_any |= (v != 0);
    if (!omega_any) throw domain_error("condenser: empty Omega mask");
    std::vector<int> idx(grid.dim());
    for (std::size_t node = 0; node < grid.size(); ++node) {
        if (!in_k[node]) continue;
        if (!in_omega[node]) throw domain_error("condenser: K node outside Omega");
        grid.unravel(node, idx);
        for (int a = 0; a < grid.dim(); ++a) {
            if (idx[a] == 0 || idx[a] == grid.count(a) - 1)
                throw domain_error("condenser: K touches the grid edge");
            for (int step : {-1, 1}) {
                std::vector<int> q(idx);
                q[a] += step;
                if (!in_omega[grid.index(q)])
                    throw domain_error("condenser: K adjacent to the complement of Omega");
            }
        }
    }
}

namespace {

// Cell-centered gradient bookkeeping: cells are indexed by their lower
// corner; each gradient component averages the forward differences over
// the 2^(n-1) parallel edges, which kills the checkerboard null modes a
// plain central-difference energy would admit.
struct CellAssembly {
    const Grid* grid;
    int n;
    double cellvol;
    std::vector<std::size_t> cell_counts;
    std::size_t num_cells;
    std::vector<std::size_t> corner_offsets;           // 2^n linear node offsets
    std::vector<std::vector<std::size_t>> edge_lo;     // per axis, base corners of edges
    double inv_edges_h[3];                             // 1/(edges * h_a)

    explicit CellAssembly(const Grid& g) : grid(&g), n(g.dim()) {
        if (n > 3) throw domain_error("capacity: dimensions above 3 are not supported");
        cellvol = 1.0;
        num_cells = 1;
        cell_counts.resize(n);
        std::vector<std::size_t> strides(n);
        std::size_t s = 1;
        for (int a = 0; a < n; ++a) {
            strides[a] = s;
            s *= static_cast<std::size_t>(g.count(a));
            cellvol *= g.spacing(a);
            cell_counts[a] = static_cast<std::size_t>(g.count(a) - 1);
            num_cells *= cell_counts[a];
        }
        const int corners = 1 << n;
        corner_offsets.resize(corners);
        for (int b = 0; b < corners; ++b) {
            std::size_t off = 0;
            for (int a = 0; a < n; ++a)
                if (b & (1 << a)) off += strides[a];
            corner_offsets[b] = off;
        }
        edge_lo.resize(n);
        const double edges = static_cast<double>(1 << (n - 1));
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < corners; ++b)
                if (!(b & (1 << a))) edge_lo[a].push_back(corner_offsets[b]);
            inv_edges_h[a] = 1.0 / (edges * g.spacing(a));
        }
        node_strides = strides;
    }

    std::vector<std::size_t> node_strides;

    template <typename Fn>
    void for_each_cell(Fn&& fn) const {
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::size_t base = 0;
            for (int a = 0; a < n; ++a) base += idx[a] * node_strides[a];
            fn(base);
            int a = 0;
            while (a < n) {
                if (++idx[a] < cell_counts[a]) break;
                idx[a] = 0;
                ++a;
            }
            if (a == n) break;
        }
    }
};

struct EnergyGradient {
    double energy;
    std::vector<double> grad;
};

// s^(p/2) with fast paths for the two common exponents.
inline double half_pow(double s, double p) {
    if (p == 2.0) return s;
    if (p == 1.0) return std::sqrt(s);
    return std::pow(s, 0.5 * p);
}

// p * s^(p/2 - 1)
inline double half_pow_deriv(double s, double p) {
    if (p == 2.0) return 2.0;
    if (p == 1.0) return 1.0 / std::sqrt(s);
    return p * std::pow(s, 0.5 * p - 1.0);
}

double energy_only(const CellAssembly& asmb, const std::vector<double>& u, double p,
                   double delta) {
    const double d2 = delta * delta;
    double total = 0.0;
    const int n = asmb.n;
    asmb.for_each_cell([&](std::size_t base) {
        double s = d2;
        for (int a = 0; a < n; ++a) {
            double g = 0.0;
            for (std::size_t lo : asmb.edge_lo[a]) {
                const std::size_t node = base + lo;
                g += u[node + asmb.node_strides[a]] - u[node];
            }
            g *= asmb.inv_edges_h[a];
            s += g * g;
        }
        total += asmb.cellvol * half_pow(s, p);
    });
    return total;
}

EnergyGradient energy_and_gradient(const CellAssembly& asmb, const std::vector<double>& u,
                                   double p, double delta) {
    const double d2 = delta * delta;
    const int n = asmb.n;
    EnergyGradient out{0.0, std::vector<double>(u.size(), 0.0)};
    double gcomp[3];
    asmb.for_each_cell([&](std::size_t base) {
        double s = d2;
        for (int a = 0; a < n; ++a) {
            double g = 0.0;
            for (std::size_t lo : asmb.edge_lo[a]) {
                const std::size_t node = base + lo;
                g += u[node + asmb.node_strides[a]] - u[node];
            }
            g *= asmb.inv_edges_h[a];
            gcomp[a] = g;
            s += g * g;
        }
        out.energy += asmb.cellvol * half_pow(s, p);
        if (s <= 0.0) return;  // flat cell of a nonsmooth energy: subgradient 0
        const double w = asmb.cellvol * half_pow_deriv(s, p);
        for (int a = 0; a < n; ++a) {
            const double coeff = w * gcomp[a] * asmb.inv_edges_h[a];
            if (coeff == 0.0) continue;
            for (std::size_t lo : asmb.edge_lo[a]) {
                const std::size_t node = base + lo;
                out.grad[node + asmb.node_strides[a]] += coeff;
                out.grad[node] -= coeff;
            }
        }
    });
    return out;
}

// L1 lattice distance to the seed set, by per-axis relaxation sweeps.
std::vector<double> l1_distance(const Grid& g, const std::vector<std::uint8_t>& seed) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(g.size(), inf);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (seed[i]) d[i] = 0.0;
    std::vector<int> idx(g.dim());
    for (int pass = 0; pass < 2; ++pass) {
        auto relax = [&](std::size_t node) {
            g.unravel(node, idx);
            for (int a = 0; a < g.dim(); ++a) {
                for (int step : {-1, 1}) {
                    const int j = idx[a] + step;
                    if (j < 0 || j >= g.count(a)) continue;
                    std::vector<int> q(idx);
                    q[a] = j;
                    d[node] = std::min(d[node], d[g.index(q)] + g.spacing(a));
                }
            }
        };
        if (pass == 0)
            for (std::size_t node = 0; node < g.size(); ++node) relax(node);
        else
            for (std::size_t node = g.size(); node-- > 0;) relax(node);
    }
    return d;
}

}  // namespace

CapacityEstimate p_capacity(const CondenserProblem& prob, const CapacityOptions& opts) {
    prob.validate();
    const Grid& g = prob.grid;
    const std::size_t nn = g.size();

    bool k_any = false;
    for (auto v : prob.in_k) k_any |= (v != 0);
    if (!k_any) {
        // u = 0 is admissible and the constraint on K is vacuous.
        CapacityEstimate est{0.0, GridFunction(g, std::vector<double>(nn, 0.0)), 0, 0.0, {}};
        est.refinement_history.push_back({g.max_spacing(), 0.0});
        return est;
    }

    std::vector<std::uint8_t> fixed(nn, 0);
    for (std::size_t i = 0; i < nn; ++i) fixed[i] = prob.in_k[i] || !prob.in_omega[i];

    auto project = [&](std::vector<double>& u) {
        for (std::size_t i = 0; i < nn; ++i) {
            if (prob.in_k[i])
                u[i] = 1.0;
            else if (!prob.in_omega[i])
                u[i] = 0.0;
            else
                u[i] = std::clamp(u[i], 0.0, 1.0);
        }
    };

    // Initial profile from the L1 distances to K and to the zero set.
    std::vector<std::uint8_t> zero_seed(nn, 0);
    std::vector<int> idx(g.dim());
    for (std::size_t i = 0; i < nn; ++i) {
        if (!prob.in_omega[i]) {
            zero_seed[i] = 1;
            continue;
        }
        g.unravel(i, idx);
        for (int a = 0; a < g.dim(); ++a)
            if (idx[a] == 0 || idx[a] == g.count(a) - 1) zero_seed[i] = 1;
    }
    bool has_zero = false;
    for (auto v : zero_seed) has_zero |= (v != 0);
    std::vector<double> u(nn, 1.0);
    if (has_zero) {
        const auto dk = l1_distance(g, prob.in_k);
        const auto dz = l1_distance(g, zero_seed);
        for (std::size_t i = 0; i < nn; ++i) {
            const double total = dk[i] + dz[i];
            u[i] = total > 0.0 ? dz[i] / total : 1.0;
        }
    }
    project(u);

    const CellAssembly asmb(g);
    const double delta = prob.smoothing();
    const double inv_cellvol = 1.0 / asmb.cellvol;

    auto pg_norm = [&](const std::vector<double>& uu, const std::vector<double>& grad) {
        double worst = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            if (fixed[i]) continue;
            const double gd = grad[i] * inv_cellvol;
            const double moved = std::clamp(uu[i] - gd, 0.0, 1.0);
            worst = std::max(worst, std::abs(uu[i] - moved));
        }
        return worst;
    };

    EnergyGradient eg = energy_and_gradient(asmb, u, prob.p, delta);
    double tau = 0.0;
    {
        double gmax = 0.0;
        for (std::size_t i = 0; i < nn; ++i)
            if (!fixed[i]) gmax = std::max(gmax, std::abs(eg.grad[i]));
        tau = gmax > 0.0 ? 0.25 / (gmax * inv_cellvol) * asmb.cellvol : 1.0;
    }

    std::vector<double> u_prev(u), g_prev(eg.grad), trial(nn);
    int iter = 0;
    double residual = pg_norm(u, eg.grad);
    int stagnant = 0;

    while (residual > opts.tol && iter < opts.max_iter) {
        ++iter;
        // Backtracked projected step with sufficient decrease along the arc.
        double step = tau;
        double new_energy = eg.energy;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < nn; ++i) trial[i] = u[i] - step * eg.grad[i];
            project(trial);
            double decrease = 0.0;
            for (std::size_t i = 0; i < nn; ++i) decrease += eg.grad[i] * (u[i] - trial[i]);
            new_energy = energy_only(asmb, trial, prob.p, delta);
            if (new_energy <= eg.energy - 1e-4 * decrease + 1e-16 * std::abs(eg.energy)) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;  // flat to machine precision

        u_prev.swap(u);
        g_prev.swap(eg.grad);
        u.swap(trial);
        const double old_energy = eg.energy;
        eg = energy_and_gradient(asmb, u, prob.p, delta);

        // Barzilai-Borwein step from the last displacement pair.
        double sts = 0.0, sty = 0.0;
        for (std::size_t i = 0; i < nn; ++i) {
            const double s = u[i] - u_prev[i];
            sts += s * s;
            sty += s * (eg.grad[i] - g_prev[i]);
        }
        if (sty > 0.0 && sts > 0.0)
            tau = std::clamp(sts / sty, 1e-6 * step, 1e6 * step);
        else
            tau = 2.0 * step;

        residual = pg_norm(u, eg.grad);
        if (std::abs(old_energy - eg.energy) <= 1e-14 * std::max(1.0, std::abs(eg.energy)))
            ++stagnant;
        else
            stagnant = 0;
        if (stagnant >= 60) break;  // flat to rounding; the iterate stays feasible
    }

    CapacityEstimate est{energy_only(asmb, u, prob.p, 0.0), GridFunction(g, u), iter, residual, {}};
    est.refinement_history.push_back({g.max_spacing(), est.energy});
    if (residual > opts.tol && iter >= opts.max_iter)
        throw capacity_not_converged("p_capacity: projected descent hit max_iter", est);
    return est;
}

std::vector<std::uint8_t> region_node_mask(const Grid& g, const Region& region, MaskKind kind,
                                           bool at_least_nearest) {
    validate_region(region, g);
    std::vector<std::uint8_t> mask(g.size(), 0);
    const double tol = 1e-12;
    bool any = false;
    if (const auto* nm = std::get_if<NodeMask>(&region)) {
        mask = nm->inside;
        for (auto v : mask) any |= (v != 0);
    } else if (const auto* ball = std::get_if<Ball>(&region)) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point x = g.coords(i);
            const double d = euclidean_distance(x, ball->center);
            const bool in = kind == MaskKind::Closed ? d <= ball->radius + tol
                                                     : d < ball->radius - tol;
            mask[i] = in;
            any |= in;
        }
    } else {
        const auto& box = std::get<Box>(region);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Point x = g.coords(i);
            bool in = true;
            for (int a = 0; a < g.dim() && in; ++a)
                in = kind == MaskKind::Closed
                         ? (x[a] >= box.lo[a] - tol && x[a] <= box.hi[a] + tol)
                         : (x[a] > box.lo[a] + tol && x[a] < box.hi[a] - tol);
            mask[i] = in;
            any |= in;
        }
    }
    if (!any && at_least_nearest) {
        const Box bbox = region_bbox(region, g);
        Point center(g.dim());
        for (int a = 0; a < g.dim(); ++a) center[a] = 0.5 * (bbox.lo[a] + bbox.hi[a]);
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double d = euclidean_distance(g.coords(i), center);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        mask[best] = 1;
    }
    return mask;
}

std::string_view to_string(NullVerdict v) {
    return v == NullVerdict::NullSuggested ? "NullSuggested" : "PositiveSuggested";
}

NullClassification cap_null_classify(const Region& e_set, double p, const Point& box_lo,
                                     const Point& box_hi, const Region& omega, int base_nodes,
                                     int levels, const CapacityOptions& opts) {
    return cap_null_classify(
        [&e_set](const Grid& g) { return region_node_mask(g, e_set, MaskKind::Closed, true); },
        p, box_lo, box_hi, omega, base_nodes, levels, opts);
}

NullClassification classify_refinement(std::vector<double> spacings,
                                       std::vector<double> energies) {
    if (spacings.size() != energies.size() || spacings.size() < 2)
        throw domain_error("refinement classification needs at least 2 levels");
    NullClassification out;
    const std::size_t m = energies.size();
    std::vector<double> inv_h(m);
    for (std::size_t i = 0; i < m; ++i) inv_h[i] = 1.0 / spacings[i];
    bool decreasing = true;
    bool vanished = energies.back() <= 1e-14;
    for (std::size_t i = 1; i < m; ++i) decreasing &= energies[i] <= energies[i - 1];
    out.slope = vanished ? -std::numeric_limits<double>::infinity()
                         : fit_loglog_slope(inv_h, energies, 0.0);
    const double e_last = energies[m - 1], e_prev = energies[m - 2];
    out.stabilized = std::abs(e_last - e_prev) <= 0.1 * std::max(std::abs(e_last), 1e-300);
    if (vanished || (decreasing && out.slope < -0.2))
        out.verdict = NullVerdict::NullSuggested;
    else
        out.verdict = NullVerdict::PositiveSuggested;
    out.spacings = std::move(spacings);
    out.energies = std::move(energies);
    return out;
}

NullClassification cap_null_classify(const MaskBuilder& k_builder, double p, const Point& box_lo,
                                     const Point& box_hi, const Region& omega, int base_nodes,
                                     int levels, const CapacityOptions& opts) {
    if (levels < 2) throw domain_error("null classification needs at least 2 refinement levels");
    std::vector<double> spacings, energies;
    for (int level = 0; level < levels; ++level) {
        const int nodes = (base_nodes - 1) * (1 << level) + 1;
        std::vector<int> counts(box_lo.size(), nodes);
        Grid g(box_lo, box_hi, counts);
        CondenserProblem prob{g, k_builder(g), region_node_mask(g, omega, MaskKind::Open), p, -1.0};
        const CapacityEstimate est = p_capacity(prob, opts);
        spacings.push_back(g.max_spacing());
        energies.push_back(est.energy);
    }
    return classify_refinement(std::move(spacings), std::move(energies));
}

}  // namespace sobolev
