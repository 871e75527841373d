#include "sobolev/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sobolev {

double unit_ball_volume(int dim) {
    return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

double euclidean_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Grid::Grid(Point lower, Point upper, std::vector<int> counts)
    : lower_(std::move(lower)), upper_(std::move(upper)), counts_(std::move(counts)) {
    if (counts_.empty() || lower_.size() != counts_.size() || upper_.size() != counts_.size())
        throw domain_error("grid: dimension mismatch between corners and counts");
    const int n = dim();
    spacing_.resize(n);
    strides_.resize(n);
    total_ = 1;
    for (int a = 0; a < n; ++a) {
        if (counts_[a] < 3) throw domain_error("grid: need at least 3 nodes per axis");
        if (!(upper_[a] > lower_[a])) throw domain_error("grid: upper corner must exceed lower");
        spacing_[a] = (upper_[a] - lower_[a]) / (counts_[a] - 1);
        strides_[a] = total_;
        total_ *= static_cast<std::size_t>(counts_[a]);
    }
}

double Grid::max_spacing() const {
    return *std::max_element(spacing_.begin(), spacing_.end());
}

std::size_t Grid::index(std::span<const int> idx) const {
    std::size_t node = 0;
    for (int a = 0; a < dim(); ++a) node += strides_[a] * static_cast<std::size_t>(idx[a]);
    return node;
}

void Grid::unravel(std::size_t node, std::span<int> idx) const {
    for (int a = 0; a < dim(); ++a) {
        idx[a] = static_cast<int>(node % static_cast<std::size_t>(counts_[a]));
        node /= static_cast<std::size_t>(counts_[a]);
    }
}

Point Grid::coords(std::size_t node) const {
    Point x(dim());
    for (int a = 0; a < dim(); ++a) {
        const int i = static_cast<int>(node % static_cast<std::size_t>(counts_[a]));
        node /= static_cast<std::size_t>(counts_[a]);
        x[a] = coord(a, i);
    }
    return x;
}

bool Grid::contains(const Point& x, double slack) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int a = 0; a < dim(); ++a)
        if (x[a] < lower_[a] - slack || x[a] > upper_[a] + slack) return false;
    return true;
}

bool Grid::operator==(const Grid& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && counts_ == other.counts_;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw domain_error("grid function: value array does not match grid size");
    for (double v : values_)
        if (!std::isfinite(v)) throw domain_error("grid function: non-finite value");
}

VectorField::VectorField(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size() * static_cast<std::size_t>(grid_.dim()))
        throw domain_error("vector field: value array does not match grid size");
    for (double v : values_)
        if (!std::isfinite(v)) throw domain_error("vector field: non-finite value");
}

Point VectorField::at(std::size_t node) const {
    Point p(components());
    for (int c = 0; c < components(); ++c) p[c] = value(node, c);
    return p;
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw domain_error("grid functions live on different grids");
}

}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
    return {a.grid(), std::move(out)};
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
    return {a.grid(), std::move(out)};
}

GridFunction operator*(double c, const GridFunction& f) {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * f[i];
    return {f.grid(), std::move(out)};
}

GridFunction operator*(const GridFunction& a, const GridFunction& b) {
    require_same_grid(a, b);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return {a.grid(), std::move(out)};
}

GridFunction component(const VectorField& v, int c) {
    std::vector<double> out(v.grid().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v.value(i, c);
    return {v.grid(), std::move(out)};
}

void validate_region(const Region& region, const Grid& g) {
    if (const auto* ball = std::get_if<Ball>(&region)) {
        if (static_cast<int>(ball->center.size()) != g.dim())
            throw domain_error("region: ball center dimension mismatch");
        if (!(ball->radius > 0.0)) throw domain_error("region: ball radius must be positive");
    } else if (const auto* box = std::get_if<Box>(&region)) {
        if (static_cast<int>(box->lo.size()) != g.dim() ||
            static_cast<int>(box->hi.size()) != g.dim())
            throw domain_error("region: box corner dimension mismatch");
        for (int a = 0; a < g.dim(); ++a)
            if (!(box->hi[a] > box->lo[a])) throw domain_error("region: box corners out of order");
    } else {
        const auto& mask = std::get<NodeMask>(region);
        if (mask.inside.size() != g.size())
            throw domain_error("region: node mask length does not match grid");
    }
}

Box region_bbox(const Region& region, const Grid& g) {
    Box out;
    out.lo.resize(g.dim());
    out.hi.resize(g.dim());
    if (const auto* ball = std::get_if<Ball>(&region)) {
        for (int a = 0; a < g.dim(); ++a) {
            out.lo[a] = ball->center[a] - ball->radius;
            out.hi[a] = ball->center[a] + ball->radius;
        }
    } else if (const auto* box = std::get_if<Box>(&region)) {
        out = *box;
    } else {
        const auto& mask = std::get<NodeMask>(region);
        bool any = false;
        std::vector<int> idx(g.dim());
        for (std::size_t i = 0; i < mask.inside.size(); ++i) {
            if (!mask.inside[i]) continue;
            const Point x = g.coords(i);
            if (!any) {
                out.lo = x;
                out.hi = x;
                any = true;
            } else {
                for (int a = 0; a < g.dim(); ++a) {
                    out.lo[a] = std::min(out.lo[a], x[a]);
                    out.hi[a] = std::max(out.hi[a], x[a]);
                }
            }
        }
        if (!any) throw domain_error("region: empty node mask");
    }
    return out;
}

namespace {

struct CellBounds {
    double lo, hi;
};

// Dual cell of node i along one axis: half a spacing each side, clipped
// at the grid boundary.
CellBounds dual_cell(const Grid& g, int axis, int i) {
    const double c = g.coord(axis, i);
    const double h = g.spacing(axis);
    CellBounds b{c - 0.5 * h, c + 0.5 * h};
    if (i == 0) b.lo = c;
    if (i == g.count(axis) - 1) b.hi = c;
    return b;
}

double overlap(double alo, double ahi, double blo, double bhi) {
    return std::max(0.0, std::min(ahi, bhi) - std::max(alo, blo));
}

// Index window of nodes whose dual cells can meet [lo, hi] on an axis.
void index_window(const Grid& g, int axis, double lo, double hi, int& i0, int& i1) {
    const double h = g.spacing(axis);
    const double glo = g.lower(axis);
    i0 = std::max(0, static_cast<int>(std::floor((lo - glo) / h - 0.5)) - 1);
    i1 = std::min(g.count(axis) - 1, static_cast<int>(std::ceil((hi - glo) / h + 0.5)) + 1);
}

template <typename Fn>
void for_each_in_window(const Grid& g, const std::vector<int>& lo, const std::vector<int>& hi,
                        Fn&& fn) {
    const int n = g.dim();
    std::vector<int> idx(lo);
    while (true) {
        fn(idx);
        int a = 0;
        while (a < n) {
            if (++idx[a] <= hi[a]) break;
            idx[a] = lo[a];
            ++a;
        }
        if (a == n) break;
    }
}

}  // namespace

std::vector<WeightedNode> region_weights(const Grid& g, const Region& region) {
    validate_region(region, g);
    const int n = g.dim();

    // a 1D ball is an interval: take the exact overlap instead of the
    // subsampled coverage fraction
    if (n == 1) {
        if (const auto* ball = std::get_if<Ball>(&region)) {
            return region_weights(
                g, Box{{ball->center[0] - ball->radius}, {ball->center[0] + ball->radius}});
        }
    }
    std::vector<WeightedNode> out;

    if (const auto* mask = std::get_if<NodeMask>(&region)) {
        std::vector<int> idx(n);
        for (std::size_t node = 0; node < g.size(); ++node) {
            if (!mask->inside[node]) continue;
            g.unravel(node, idx);
            double w = 1.0;
            for (int a = 0; a < n; ++a) {
                const CellBounds b = dual_cell(g, a, idx[a]);
                w *= b.hi - b.lo;
            }
            if (w > 0.0) out.push_back({node, w});
        }
        return out;
    }

    const Box bbox = region_bbox(region, g);
    std::vector<int> lo(n), hi(n);
    for (int a = 0; a < n; ++a) {
        index_window(g, a, bbox.lo[a], bbox.hi[a], lo[a], hi[a]);
        if (lo[a] > hi[a]) return out;
    }

    if (const auto* box = std::get_if<Box>(&region)) {
        for_each_in_window(g, lo, hi, [&](const std::vector<int>& idx) {
            double w = 1.0;
            for (int a = 0; a < n && w > 0.0; ++a) {
                const CellBounds b = dual_cell(g, a, idx[a]);
                w *= overlap(b.lo, b.hi, box->lo[a], box->hi[a]);
            }
            if (w > 0.0) out.push_back({g.index(idx), w});
        });
    } else {
        const auto& ball = std::get<Ball>(region);
        const double r2 = ball.radius * ball.radius;
        std::vector<CellBounds> cell(n);
        for_each_in_window(g, lo, hi, [&](const std::vector<int>& idx) {
            double vol = 1.0;
            double dmin2 = 0.0, dmax2 = 0.0;
            for (int a = 0; a < n; ++a) {
                cell[a] = dual_cell(g, a, idx[a]);
                vol *= cell[a].hi - cell[a].lo;
                const double c = ball.center[a];
                const double clamped = std::clamp(c, cell[a].lo, cell[a].hi);
                dmin2 += (c - clamped) * (c - clamped);
                const double far = std::max(std::abs(c - cell[a].lo), std::abs(c - cell[a].hi));
                dmax2 += far * far;
            }
            if (vol <= 0.0 || dmin2 >= r2) return;
            double w = vol;
            if (dmax2 > r2) {
                // Cut cell: midpoints of a 3-per-axis split.
                int inside = 0, total = 1;
                for (int a = 0; a < n; ++a) total *= 3;
                std::vector<int> sub(n, 0);
                for (int s = 0; s < total; ++s) {
                    int t = s;
                    double d2 = 0.0;
                    for (int a = 0; a < n; ++a) {
                        const int k = t % 3;
                        t /= 3;
                        const double width = cell[a].hi - cell[a].lo;
                        const double y = cell[a].lo + width * (2 * k + 1) / 6.0;
                        d2 += (y - ball.center[a]) * (y - ball.center[a]);
                    }
                    if (d2 < r2) ++inside;
                }
                if (inside == 0) return;
                w = vol * inside / total;
            }
            out.push_back({g.index(idx), w});
        });
    }
    std::sort(out.begin(), out.end(),
              [](const WeightedNode& a, const WeightedNode& b) { return a.node < b.node; });
    return out;
}

namespace {

std::vector<WeightedNode> nonempty_weights(const Grid& g, const Region& region) {
    auto w = region_weights(g, region);
    if (w.empty()) throw domain_error("region does not intersect the grid");
    return w;
}

void require_p(double p) {
    if (!(p >= 1.0)) throw domain_error("exponent p must be >= 1");
}

}  // namespace

double lp_norm(const GridFunction& f, double p, const Region& region) {
    require_p(p);
    double s = 0.0;
    for (const auto& [node, w] : nonempty_weights(f.grid(), region))
        s += w * std::pow(std::abs(f[node]), p);
    return std::pow(s, 1.0 / p);
}

double lp_norm(const VectorField& v, double p, const Region& region) {
    require_p(p);
    const int nc = v.components();
    double s = 0.0;
    for (const auto& [node, w] : nonempty_weights(v.grid(), region)) {
        double m2 = 0.0;
        for (int c = 0; c < nc; ++c) {
            const double x = v.value(node, c);
            m2 += x * x;
        }
        s += w * std::pow(std::sqrt(m2), p);
    }
    return std::pow(s, 1.0 / p);
}

double wkp_norm(const GridFunction& f, int k, double p, const Region& region) {
    require_p(p);
    if (k < 0) throw domain_error("derivative order k must be >= 0");
    const Grid& g = f.grid();
    if (k > 0) {
        const Box bbox = region_bbox(region, g);
        for (int a = 0; a < g.dim(); ++a) {
            const double inset = 2.0 * k * g.spacing(a);
            const double slack = 1e-9 * g.spacing(a);
            if (bbox.lo[a] < g.lower(a) + inset - slack ||
                bbox.hi[a] > g.upper(a) - inset + slack)
                throw domain_error("region too close to the grid boundary for order-k stencils");
        }
    }
    double total = 0.0;
    for (const auto& orders : derivative_orders(g.dim(), k))
        total += lp_norm(partial_derivative(f, orders), p, region);
    return total;
}

namespace {

void require_ball_inside(const Grid& g, const Point& x, double r) {
    if (static_cast<int>(x.size()) != g.dim()) throw domain_error("ball center dimension mismatch");
    if (!(r > 0.0)) throw domain_error("ball radius must be positive");
    for (int a = 0; a < g.dim(); ++a) {
        const double slack = 1e-9 * g.spacing(a);
        if (x[a] - r < g.lower(a) - slack || x[a] + r > g.upper(a) + slack)
            throw domain_error("ball exits the grid domain");
    }
}

}  // namespace

double ball_average(const GridFunction& f, const Point& x, double r) {
    require_ball_inside(f.grid(), x, r);
    double s = 0.0, vol = 0.0;
    for (const auto& [node, w] : nonempty_weights(f.grid(), Ball{x, r})) {
        s += w * f[node];
        vol += w;
    }
    return s / vol;
}

Point ball_average(const VectorField& v, const Point& x, double r) {
    require_ball_inside(v.grid(), x, r);
    const int nc = v.components();
    Point s(nc, 0.0);
    double vol = 0.0;
    for (const auto& [node, w] : nonempty_weights(v.grid(), Ball{x, r})) {
        for (int c = 0; c < nc; ++c) s[c] += w * v.value(node, c);
        vol += w;
    }
    for (int c = 0; c < nc; ++c) s[c] /= vol;
    return s;
}

double ball_deviation(const GridFunction& f, const Point& x, double r, double center, double p) {
    require_p(p);
    require_ball_inside(f.grid(), x, r);
    double s = 0.0, vol = 0.0;
    for (const auto& [node, w] : nonempty_weights(f.grid(), Ball{x, r})) {
        s += w * std::pow(std::abs(f[node] - center), p);
        vol += w;
    }
    return s / vol;
}

double ball_deviation(const VectorField& v, const Point& x, double r, const Point& center,
                      double p) {
    require_p(p);
    require_ball_inside(v.grid(), x, r);
    if (center.size() != static_cast<std::size_t>(v.components()))
        throw domain_error("deviation center dimension mismatch");
    double s = 0.0, vol = 0.0;
    for (const auto& [node, w] : nonempty_weights(v.grid(), Ball{x, r})) {
        double m2 = 0.0;
        for (int c = 0; c < v.components(); ++c) {
            const double d = v.value(node, c) - center[c];
            m2 += d * d;
        }
        s += w * std::pow(std::sqrt(m2), p);
        vol += w;
    }
    return s / vol;
}

GridFunction axis_derivative(const GridFunction& f, int axis) {
    const Grid& g = f.grid();
    if (axis < 0 || axis >= g.dim()) throw domain_error("derivative axis out of range");
    const int m = g.count(axis);
    const double h = g.spacing(axis);
    std::vector<double> out(g.size());
    std::vector<int> idx(g.dim());
    for (std::size_t node = 0; node < g.size(); ++node) {
        g.unravel(node, idx);
        const int i = idx[axis];
        auto at = [&](int j) {
            std::vector<int> q(idx);
            q[axis] = j;
            return f[g.index(q)];
        };
        double d;
        if (i == 0)
            d = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        else if (i == m - 1)
            d = (3.0 * at(m - 1) - 4.0 * at(m - 2) + at(m - 3)) / (2.0 * h);
        else
            d = (at(i + 1) - at(i - 1)) / (2.0 * h);
        out[node] = d;
    }
    return {g, std::move(out)};
}

VectorField gradient_fd(const GridFunction& f) {
    const Grid& g = f.grid();
    const int n = g.dim();
    std::vector<double> out(g.size() * static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const GridFunction da = axis_derivative(f, a);
        for (std::size_t node = 0; node < g.size(); ++node)
            out[node * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = da[node];
    }
    return {g, std::move(out)};
}

GridFunction partial_derivative(const GridFunction& f, std::span<const int> orders) {
    const Grid& g = f.grid();
    if (static_cast<int>(orders.size()) != g.dim())
        throw domain_error("derivative order tuple dimension mismatch");
    GridFunction cur = f;
    for (int a = 0; a < g.dim(); ++a) {
        if (orders[a] < 0) throw domain_error("derivative orders must be nonnegative");
        for (int rep = 0; rep < orders[a]; ++rep) cur = axis_derivative(cur, a);
    }
    return cur;
}

namespace {

void enumerate_orders(int dim, int axis, int remaining, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if (axis == dim - 1) {
        cur[axis] = remaining;
        out.push_back(cur);
        return;
    }
    for (int take = remaining; take >= 0; --take) {
        cur[axis] = take;
        enumerate_orders(dim, axis + 1, remaining - take, cur, out);
    }
}

}  // namespace

std::vector<std::vector<int>> derivative_orders(int dim, int max_total) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(dim);
    for (int total = 0; total <= max_total; ++total) enumerate_orders(dim, 0, total, cur, out);
    return out;
}

}  // namespace sobolev
