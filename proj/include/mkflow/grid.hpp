#pragma once
#include <vector>
#include <memory>
#include <cstdint>
#include <cmath>
#include <limits>
#include <string>
#include <cstdio>

#include "smallmat.hpp"
#include "errors.hpp"

namespace mkflow {

enum class NodeClass : uint8_t { Exterior = 0, Boundary = 1, Interior = 2 };

template <int N> using MultiIndex = std::array<int, N>;

inline std::string format_node(const int* idx, const double* x, int n) {
    char buf[160];
    if (n == 2)
        std::snprintf(buf, sizeof buf, "node (%d,%d) at (%.6g,%.6g)", idx[0], idx[1], x[0], x[1]);
    else
        std::snprintf(buf, sizeof buf, "node (%d,%d,%d) at (%.6g,%.6g,%.6g)", idx[0], idx[1],
                      idx[2], x[0], x[1], x[2]);
    return buf;
}

// Uniform lattice over [-R, R]^N masked against the ball B_R.
// Interior nodes are the lattice nodes strictly inside the ball; boundary
// nodes are the one-step closure (full 3^N stencil) outside, so every
// centered stencil of an interior node reads defined values.
template <int N>
struct GridDomain {
    double radius = 0.0;
    double spacing = 0.0;
    int m = 0; // nodes per axis = m + 1
    std::vector<uint8_t> cls;
    std::vector<int> interior;      // lattice indices in lattice order
    std::vector<int> boundary;      // lattice indices in lattice order
    std::vector<int32_t> slot;      // lattice index -> interior slot, or -1
    std::array<int, N> stride{};

    static constexpr int dim = N;

    int nodes_per_axis() const { return m + 1; }
    std::size_t lattice_size() const {
        std::size_t s = 1;
        for (int d = 0; d < N; ++d) s *= (m + 1);
        return s;
    }

    int lin(const MultiIndex<N>& I) const {
        int p = 0;
        for (int d = 0; d < N; ++d) p += I[d] * stride[d];
        return p;
    }
    MultiIndex<N> multi(int p) const {
        MultiIndex<N> I;
        for (int d = N - 1; d >= 0; --d) {
            I[d] = p % (m + 1);
            p /= (m + 1);
        }
        return I;
    }
    Vec<N> coord(const MultiIndex<N>& I) const {
        Vec<N> x;
        for (int d = 0; d < N; ++d) x[d] = I[d] * spacing - radius;
        return x;
    }
    Vec<N> coord(int p) const { return coord(multi(p)); }

    NodeClass node_class(int p) const { return static_cast<NodeClass>(cls[p]); }
    bool is_interior(int p) const { return cls[p] == uint8_t(NodeClass::Interior); }
    bool is_exterior(int p) const { return cls[p] == uint8_t(NodeClass::Exterior); }

    std::string node_name(int p) const {
        MultiIndex<N> I = multi(p);
        Vec<N> x = coord(I);
        return format_node(I.data(), x.data(), N);
    }

    static std::shared_ptr<const GridDomain> make(double radius, double spacing) {
        if (!(radius > 0) || !(spacing > 0))
            throw ValidationError("grid: radius and spacing must be positive");
        auto g = std::make_shared<GridDomain>();
        g->radius = radius;
        g->spacing = spacing;
        double mr = 2.0 * radius / spacing;
        g->m = int(std::lround(mr));
        if (std::fabs(g->m * spacing - 2.0 * radius) > 1e-9 * radius)
            throw ValidationError("grid: 2*radius must be an integer multiple of spacing");
        int npa = g->m + 1;
        g->stride[N - 1] = 1;
        for (int d = N - 2; d >= 0; --d) g->stride[d] = g->stride[d + 1] * npa;
        std::size_t total = g->lattice_size();
        g->cls.assign(total, uint8_t(NodeClass::Exterior));
        g->slot.assign(total, -1);

        double R2 = radius * radius;
        auto inside = [&](const MultiIndex<N>& I) {
            double s = 0;
            for (int d = 0; d < N; ++d) {
                double x = I[d] * spacing - radius;
                s += x * x;
            }
            return s < R2;
        };

        // pass 1: interior
        std::vector<MultiIndex<N>> idx(total);
        {
            MultiIndex<N> I{};
            for (std::size_t p = 0; p < total; ++p) {
                idx[p] = I;
                if (inside(I)) g->cls[p] = uint8_t(NodeClass::Interior);
                for (int d = N - 1; d >= 0; --d) {
                    if (++I[d] <= g->m) break;
                    I[d] = 0;
                }
            }
        }
        // pass 2: boundary = exterior nodes with an interior Chebyshev neighbor
        for (std::size_t p = 0; p < total; ++p) {
            if (g->cls[p] != uint8_t(NodeClass::Exterior)) continue;
            const MultiIndex<N>& I = idx[p];
            bool touches = false;
            MultiIndex<N> J;
            int count = 1;
            for (int d = 0; d < N; ++d) count *= 3;
            for (int c = 0; c < count && !touches; ++c) {
                int cc = c;
                bool ok = true, self = true;
                for (int d = 0; d < N; ++d) {
                    int o = cc % 3 - 1;
                    cc /= 3;
                    J[d] = I[d] + o;
                    if (o != 0) self = false;
                    if (J[d] < 0 || J[d] > g->m) ok = false;
                }
                if (!ok || self) continue;
                if (g->cls[g->lin(J)] == uint8_t(NodeClass::Interior)) touches = true;
            }
            if (touches) g->cls[p] = uint8_t(NodeClass::Boundary);
        }
        for (std::size_t p = 0; p < total; ++p) {
            if (g->cls[p] == uint8_t(NodeClass::Interior)) {
                g->slot[p] = int32_t(g->interior.size());
                g->interior.push_back(int(p));
            } else if (g->cls[p] == uint8_t(NodeClass::Boundary)) {
                g->boundary.push_back(int(p));
            }
        }
        if (g->interior.empty())
            throw ValidationError("grid: no interior nodes (radius too small for spacing)");
        return g;
    }
};

template <int N>
struct GridFunction {
    std::shared_ptr<const GridDomain<N>> dom;
    std::vector<double> v; // full lattice; exterior nodes NaN

    GridFunction() = default;
    explicit GridFunction(std::shared_ptr<const GridDomain<N>> d)
        : dom(std::move(d)), v(dom->lattice_size(), std::numeric_limits<double>::quiet_NaN()) {}

    double& operator[](int p) { return v[p]; }
    double operator[](int p) const { return v[p]; }

    template <class Fn>
    static GridFunction sample(std::shared_ptr<const GridDomain<N>> d, Fn&& f) {
        GridFunction u(std::move(d));
        for (int p : u.dom->interior) u.v[p] = f(u.dom->coord(p));
        for (int p : u.dom->boundary) u.v[p] = f(u.dom->coord(p));
        return u;
    }

    // finite at every non-exterior node
    void validate_finite() const {
        for (int p : dom->interior)
            if (!std::isfinite(v[p]))
                throw CorruptInputError("non-finite value at interior " + dom->node_name(p));
        for (int p : dom->boundary)
            if (!std::isfinite(v[p]))
                throw CorruptInputError("non-finite value at boundary " + dom->node_name(p));
    }

    // Bilinear/trilinear interpolation at an arbitrary point of the covered
    // region. Throws if the enclosing cell touches an exterior node.
    double interpolate(const Vec<N>& x) const {
        const auto& g = *dom;
        MultiIndex<N> base;
        Vec<N> t;
        for (int d = 0; d < N; ++d) {
            double s = (x[d] + g.radius) / g.spacing;
            int i = int(std::floor(s));
            if (i < 0 || i >= g.m) throw ValidationError("interpolate: point outside lattice");
            base[d] = i;
            t[d] = s - i;
        }
        double acc = 0.0;
        int corners = 1 << N;
        for (int c = 0; c < corners; ++c) {
            MultiIndex<N> I = base;
            double w = 1.0;
            for (int d = 0; d < N; ++d) {
                if (c & (1 << d)) {
                    I[d] += 1;
                    w *= t[d];
                } else {
                    w *= 1.0 - t[d];
                }
            }
            double val = v[g.lin(I)];
            if (!std::isfinite(val)) throw ValidationError("interpolate: cell touches exterior node");
            acc += w * val;
        }
        return acc;
    }
};

} // namespace mkflow
