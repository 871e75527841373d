#include "sobolev/interpolate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sobolev {

double interpolate(const GridFunction& f, const Point& x) {
    const Grid& g = f.grid();
    const int n = g.dim();
    if (static_cast<int>(x.size()) != n) throw domain_error("interpolate: dimension mismatch");
    if (!g.contains(x, 1e-9 * g.max_spacing()))
        throw domain_error("interpolate: point outside the grid");

    // Per-axis 4-node windows and Lagrange weights.
    std::vector<std::array<double, 4>> wts(n);
    std::vector<int> base(n);
    for (int a = 0; a < n; ++a) {
        const double h = g.spacing(a);
        const double rel = (x[a] - g.lower(a)) / h;
        int i0 = static_cast<int>(std::floor(rel)) - 1;
        i0 = std::clamp(i0, 0, g.count(a) - 4);
        base[a] = i0;
        const double t = rel - i0;  // in node units relative to the window
        for (int j = 0; j < 4; ++j) {
            double w = 1.0;
            for (int m = 0; m < 4; ++m) {
                if (m == j) continue;
                w *= (t - m) / (j - m);
            }
            wts[a][j] = w;
        }
    }

    const int taps = 1 << (2 * n);  // 4^n
    double sum = 0.0;
    std::vector<int> idx(n);
    for (int tap = 0; tap < taps; ++tap) {
        int t = tap;
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            const int j = t & 3;
            t >>= 2;
            idx[a] = base[a] + j;
            w *= wts[a][j];
        }
        if (w != 0.0) sum += w * f[g.index(idx)];
    }
    return sum;
}

Grid reference_lattice(const Region& region, int nodes_per_axis, int inset_stencils) {
    if (nodes_per_axis < 8) throw domain_error("reference lattice: too few nodes per axis");
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
        throw domain_error("reference lattice: region must be a ball or a box");
    }
    const int n = static_cast<int>(bbox.lo.size());
    const double s = std::max(1, inset_stencils);
    Point lo(n), hi(n);
    std::vector<int> counts(n, nodes_per_axis);
    for (int a = 0; a < n; ++a) {
        const double width = bbox.hi[a] - bbox.lo[a];
        // pad so that pad >= 2*s*h with h = (width + 2 pad)/(nodes-1)
        const double pad = 2.0 * s * width / (nodes_per_axis - 1 - 4.0 * s);
        if (!(pad > 0.0)) throw domain_error("reference lattice: node count too small for inset");
        lo[a] = bbox.lo[a] - pad;
        hi[a] = bbox.hi[a] + pad;
    }
    return Grid(lo, hi, counts);
}

}  // namespace sobolev
