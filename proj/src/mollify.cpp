#include "sobolev/mollify.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <unordered_map>

namespace sobolev {

namespace {

double bump_shape(double rho2) {
    if (rho2 >= 1.0) return 0.0;
    return std::exp(1.0 / (rho2 - 1.0));
}

// Composite Simpson of g over [0,1], n panels (n even).
template <typename Fn>
double simpson01(Fn&& g, int n) {
    const double h = 1.0 / n;
    double s = g(0.0) + g(1.0);
    for (int i = 1; i < n; ++i) s += g(i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

}  // namespace

double kernel_constant(int dim) {
    if (dim < 1) throw domain_error("kernel constant: dimension must be >= 1");
    static std::mutex mutex;
    static std::unordered_map<int, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(dim); it != cache.end()) return it->second;

    // integral over B(0,1) = n*omega_n * int_0^1 shape(r^2) r^(n-1) dr,
    // refined until two successive Simpson levels agree to 1e-10.
    auto radial = [dim](double r) { return bump_shape(r * r) * std::pow(r, dim - 1); };
    double prev = simpson01(radial, 64);
    double cur = prev;
    bool converged = false;
    for (int n = 128; n <= (1 << 22); n *= 2) {
        cur = simpson01(radial, n);
        if (std::abs(cur - prev) < 1e-10 * std::max(1.0, std::abs(cur))) {
            converged = true;
            break;
        }
        prev = cur;
    }
    if (!converged) throw numeric_error("kernel constant: quadrature did not converge");
    const double mass = dim * unit_ball_volume(dim) * cur;
    const double c = 1.0 / mass;
    cache[dim] = c;
    return c;
}

double bump_value(int dim, const Point& x) {
    if (static_cast<int>(x.size()) != dim) throw domain_error("bump: dimension mismatch");
    double rho2 = 0.0;
    for (double v : x) rho2 += v * v;
    return kernel_constant(dim) * bump_shape(rho2);
}

Point bump_gradient(int dim, const Point& x) {
    double rho2 = 0.0;
    for (double v : x) rho2 += v * v;
    Point g(dim, 0.0);
    if (rho2 >= 1.0) return g;
    const double d = rho2 - 1.0;
    const double factor = kernel_constant(dim) * bump_shape(rho2) * (-2.0 / (d * d));
    for (int a = 0; a < dim; ++a) g[a] = factor * x[a];
    return g;
}

MollifierKernel::MollifierKernel(const Grid& g, double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw domain_error("mollifier: eps must be positive");
    if (eps < 2.0 * g.max_spacing())
        throw resolution_error("mollifier: eps must span at least 2 grid spacings");
    const int n = g.dim();
    const double c = kernel_constant(n);
    reach_.resize(n);
    std::vector<int> lo(n), hi(n);
    for (int a = 0; a < n; ++a) {
        reach_[a] = static_cast<int>(std::ceil(eps / g.spacing(a))) - 1;
        lo[a] = -reach_[a];
        hi[a] = reach_[a];
    }
    double cellvol = 1.0;
    for (int a = 0; a < n; ++a) cellvol *= g.spacing(a);

    std::vector<int> off(lo);
    double mass = 0.0;
    while (true) {
        double rho2 = 0.0;
        for (int a = 0; a < n; ++a) {
            const double y = off[a] * g.spacing(a) / eps;
            rho2 += y * y;
        }
        if (rho2 < 1.0) {
            const double w = c * bump_shape(rho2) / std::pow(eps, n) * cellvol;
            offsets_.push_back(off);
            weights_.push_back(w);
            mass += w;
        }
        int a = 0;
        while (a < n) {
            if (++off[a] <= hi[a]) break;
            off[a] = lo[a];
            ++a;
        }
        if (a == n) break;
    }
    raw_mass_ = mass;
    if (!(mass > 0.0)) throw resolution_error("mollifier: kernel vanished on the stencil");
    for (double& w : weights_) w /= mass;
}

NodeMask MollifiedFunction::eroded_mask(int layers) const {
    const Grid& g = fn.grid();
    NodeMask out{std::vector<std::uint8_t>(g.size(), 0)};
    std::vector<int> idx(g.dim());
    for (std::size_t node = 0; node < g.size(); ++node) {
        if (!defined[node]) continue;
        g.unravel(node, idx);
        bool ok = true;
        for (int a = 0; a < g.dim() && ok; ++a) {
            for (int step = -layers; step <= layers && ok; ++step) {
                const int j = idx[a] + step;
                if (j < 0 || j >= g.count(a)) {
                    ok = false;
                    break;
                }
                std::vector<int> q(idx);
                q[a] = j;
                if (!defined[g.index(q)]) ok = false;
            }
        }
        if (ok) out.inside[node] = 1;
    }
    return out;
}

MollifiedFunction mollify(const GridFunction& f, double eps) {
    const Grid& g = f.grid();
    const MollifierKernel kernel(g, eps);
    const int n = g.dim();

    // Omega_eps: nodes farther than eps from the boundary of the grid box.
    std::vector<std::uint8_t> defined(g.size(), 0);
    std::vector<int> idx(n);
    std::size_t defined_count = 0;
    for (std::size_t node = 0; node < g.size(); ++node) {
        g.unravel(node, idx);
        bool inside = true;
        for (int a = 0; a < n; ++a) {
            const double x = g.coord(a, idx[a]);
            if (x - g.lower(a) <= eps || g.upper(a) - x <= eps) {
                inside = false;
                break;
            }
        }
        if (inside) {
            defined[node] = 1;
            ++defined_count;
        }
    }
    if (defined_count == 0)
        throw domain_error("mollify: eps leaves no interior nodes (empty Omega_eps)");

    std::vector<double> out(g.size(), 0.0);
    const auto& offsets = kernel.offsets();
    const auto& weights = kernel.weights();
    std::vector<int> q(n);
    for (std::size_t node = 0; node < g.size(); ++node) {
        if (!defined[node]) continue;
        g.unravel(node, idx);
        double s = 0.0;
        for (std::size_t k = 0; k < offsets.size(); ++k) {
            for (int a = 0; a < n; ++a) q[a] = idx[a] + offsets[k][a];
            s += weights[k] * f[g.index(q)];
        }
        out[node] = s;
    }
    return {GridFunction(g, std::move(out)), std::move(defined)};
}

}  // namespace sobolev
