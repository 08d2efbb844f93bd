#pragma once
#include <vector>
#include <cmath>
#include <string>
#include <optional>

#include "grid.hpp"
#include "smallmat.hpp"
#include "parallel.hpp"
#include "errors.hpp"

namespace mkflow {

// ---------------------------------------------------------------------------
// Stencils: second-order central differences; boundary nodes carry Dirichlet
// data, so every interior node has a full centered stencil.
// ---------------------------------------------------------------------------

template <int N>
struct NodeDerivs {
    Vec<N> grad{};
    Mat<N> hess{};
};

template <int N>
inline NodeDerivs<N> node_derivs(const GridFunction<N>& u, int p) {
    const auto& g = *u.dom;
    const double h = g.spacing;
    NodeDerivs<N> d;
    const double up = u[p];
    for (int a = 0; a < N; ++a) {
        double fp = u[p + g.stride[a]];
        double fm = u[p - g.stride[a]];
        d.grad[a] = (fp - fm) / (2.0 * h);
        d.hess(a, a) = (fp - 2.0 * up + fm) / (h * h);
        for (int b = a + 1; b < N; ++b) {
            double fpp = u[p + g.stride[a] + g.stride[b]];
            double fpm = u[p + g.stride[a] - g.stride[b]];
            double fmp = u[p - g.stride[a] + g.stride[b]];
            double fmm = u[p - g.stride[a] - g.stride[b]];
            double mixed = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            d.hess(a, b) = mixed;
            d.hess(b, a) = mixed;
        }
    }
    return d;
}

template <int N>
struct DerivativeFields {
    std::vector<Vec<N>> grad; // per interior slot
    std::vector<Mat<N>> hess;
};

/// Gradient and Hessian at every interior node.
template <int N>
inline DerivativeFields<N> differentiate(const GridFunction<N>& u) {
    u.validate_finite();
    const auto& g = *u.dom;
    DerivativeFields<N> out;
    out.grad.resize(g.interior.size());
    out.hess.resize(g.interior.size());
    parallel_for(g.interior.size(), [&](std::size_t i) {
        NodeDerivs<N> d = node_derivs(u, g.interior[i]);
        out.grad[i] = d.grad;
        out.hess[i] = d.hess;
    });
    return out;
}

// ---------------------------------------------------------------------------
// Curvature kernel. With q = Du, s = |q|^2, w = 1/sqrt(1-s):
//   shape  h^i_j = w (I + q q^T/(1-s)) D2u,
// and the symmetric matrix similar to it, S~ = w P D2u P with P = (I+qq^T/(1-s))^{1/2},
// whose eigenvalues are the principal curvatures.
// ---------------------------------------------------------------------------

inline double sqrt_coeff_beta(double s, double w) {
    // beta with P = I + beta q q^T, (1 + beta s)^2 = 1/(1-s)
    if (s > 1e-8) return (w - 1.0) / s;
    return 0.5 + 0.375 * s + 0.3125 * s * s;
}
inline double sqrt_coeff_beta_ds(double s, double w) {
    if (s > 1e-6) return (0.5 * w * w * w * s - w + 1.0) / (s * s);
    return 0.375 + 0.625 * s;
}

template <int N>
struct CurvatureCore {
    Vec<N> q{};
    Mat<N> K{};       // Hessian
    double s = 0.0;   // |q|^2
    double w = 1.0;   // nu
    Mat<N> P{};       // symmetric square root factor
    Mat<N> Stilde{};  // symmetric conjugate of the shape matrix
    double H1 = 0.0;
    double H2 = 0.0;
    double F = 0.0;   // sqrt(max(H2,0))
    bool spacelike = true;
};

template <int N>
inline CurvatureCore<N> curvature_core(const NodeDerivs<N>& d, double theta) {
    CurvatureCore<N> c;
    c.q = d.grad;
    c.K = d.hess;
    c.s = norm2(c.q);
    double cap = (1.0 - theta) * (1.0 - theta);
    if (!(c.s <= cap)) {
        c.spacelike = false;
        return c;
    }
    c.w = 1.0 / std::sqrt(1.0 - c.s);
    double beta = sqrt_coeff_beta(c.s, c.w);
    c.P = Mat<N>::identity();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) c.P(i, j) += beta * c.q[i] * c.q[j];
    Mat<N> KP = matmul(c.K, c.P);
    c.Stilde = matmul(c.P, KP);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) c.Stilde(i, j) *= c.w;
    c.H1 = trace(c.Stilde);
    c.H2 = sigma2_minors(c.Stilde);
    c.F = c.H2 > 0 ? std::sqrt(c.H2) : 0.0;
    return c;
}

// Nonsymmetric chart form of the curvature endomorphism.
template <int N>
inline Mat<N> shape_matrix(const CurvatureCore<N>& c) {
    Mat<N> M = Mat<N>::identity();
    double f = 1.0 / (1.0 - c.s);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M(i, j) += f * c.q[i] * c.q[j];
    Mat<N> S = matmul(M, c.K);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) S(i, j) *= c.w;
    return S;
}

// ---------------------------------------------------------------------------
// Linearizations. Coefficients of the first variation with respect to the
// Hessian (matrix a, symmetric positive definite on the admissible cone) and
// the gradient (vector b).
// ---------------------------------------------------------------------------

template <int N>
struct LinearizedNode {
    double value = 0.0;
    Mat<N> a{};
    Vec<N> b{};
};

// F = sqrt(sigma2): dF/dS~ = ((tr S~) I - S~)/(2F)
template <int N>
inline LinearizedNode<N> linearize_sqrtH2_core(const CurvatureCore<N>& c) {
    LinearizedNode<N> L;
    L.value = c.F;
    Mat<N> G;
    double tr = trace(c.Stilde);
    double inv2F = 1.0 / (2.0 * c.F);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) G(i, j) = ((i == j ? tr : 0.0) - c.Stilde(i, j)) * inv2F;
    Mat<N> PG = matmul(c.P, G);
    Mat<N> PGP = matmul(PG, c.P);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) L.a(i, j) = c.w * PGP(i, j);

    // gradient sensitivity through w(s) and P(q)
    double beta = sqrt_coeff_beta(c.s, c.w);
    double dbeta_ds = sqrt_coeff_beta_ds(c.s, c.w);
    Mat<N> KP = matmul(c.K, c.P);
    Mat<N> PK = matmul(c.P, c.K);
    Mat<N> PKP = matmul(c.P, KP);
    for (int i = 0; i < N; ++i) {
        // dP for q_i: (2 q_i dbeta_ds) q q^T + beta (e_i q^T + q e_i^T)
        Mat<N> dP;
        double dbi = 2.0 * c.q[i] * dbeta_ds;
        for (int r = 0; r < N; ++r)
            for (int t = 0; t < N; ++t) dP(r, t) = dbi * c.q[r] * c.q[t];
        for (int t = 0; t < N; ++t) {
            dP(i, t) += beta * c.q[t];
            dP(t, i) += beta * c.q[t];
        }
        Mat<N> dS = matmul(dP, KP);         // dP K P
        Mat<N> PKdP = matmul(PK, dP);       // P K dP
        double dw = c.w * c.w * c.w * c.q[i];
        double acc = 0.0;
        for (int r = 0; r < N; ++r)
            for (int t = 0; t < N; ++t) {
                double dStilde = dw * PKP(r, t) + c.w * (dS(r, t) + PKdP(r, t));
                acc += G(r, t) * dStilde;
            }
        L.b[i] = acc;
    }
    return L;
}

// H1 = w tr K + w^3 q^T K q
template <int N>
inline LinearizedNode<N> linearize_H1_core(const CurvatureCore<N>& c) {
    LinearizedNode<N> L;
    double w = c.w, w3 = w * w * w, w5 = w3 * w * w;
    double trK = trace(c.K);
    Vec<N> Kq = matvec(c.K, c.q);
    double qKq = dot(c.q, Kq);
    L.value = w * trK + w3 * qKq;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) L.a(i, j) = (i == j ? w : 0.0) + w3 * c.q[i] * c.q[j];
    for (int i = 0; i < N; ++i)
        L.b[i] = w3 * c.q[i] * trK + 3.0 * w5 * c.q[i] * qKq + 2.0 * w3 * Kq[i];
    return L;
}

// ---------------------------------------------------------------------------
// CurvatureField: materialized per-node geometry.
// ---------------------------------------------------------------------------

template <int N>
struct CurvatureField {
    std::shared_ptr<const GridDomain<N>> dom;
    std::vector<Vec<N>> gradient;     // per interior slot
    std::vector<Mat<N>> metric;       // g_ij = delta - u_i u_j
    std::vector<Mat<N>> inverse_metric;
    std::vector<Mat<N>> shape;        // h^i_j
    std::vector<Vec<N>> principal;    // sorted descending
    std::vector<double> sigma1;
    std::vector<double> sigma2;
    std::vector<double> nu;
};

template <int N>
inline CurvatureField<N> curvature(const GridFunction<N>& u, double theta = 1e-3) {
    u.validate_finite();
    const auto& g = *u.dom;
    std::size_t n = g.interior.size();
    CurvatureField<N> f;
    f.dom = u.dom;
    f.gradient.resize(n);
    f.metric.resize(n);
    f.inverse_metric.resize(n);
    f.shape.resize(n);
    f.principal.resize(n);
    f.sigma1.resize(n);
    f.sigma2.resize(n);
    f.nu.resize(n);
    std::vector<uint8_t> bad(n, 0);
    parallel_for(n, [&](std::size_t i) {
        NodeDerivs<N> d = node_derivs(u, g.interior[i]);
        CurvatureCore<N> c = curvature_core(d, theta);
        if (!c.spacelike) {
            bad[i] = 1;
            f.gradient[i] = d.grad;
            return;
        }
        f.gradient[i] = c.q;
        Mat<N> met = Mat<N>::identity();
        for (int r = 0; r < N; ++r)
            for (int t = 0; t < N; ++t) met(r, t) -= c.q[r] * c.q[t];
        f.metric[i] = met;
        f.inverse_metric[i] = inverse<N>(met);
        f.shape[i] = shape_matrix(c);
        Vec<N> lam = sym_eigenvalues(c.Stilde);
        f.principal[i] = lam;
        double s1 = 0;
        for (int r = 0; r < N; ++r) s1 += lam[r];
        double s2 = 0;
        for (int r = 0; r < N; ++r)
            for (int t = r + 1; t < N; ++t) s2 += lam[r] * lam[t];
        f.sigma1[i] = s1;
        f.sigma2[i] = s2;
        f.nu[i] = c.w;
    });
    for (std::size_t i = 0; i < n; ++i) {
        if (bad[i]) {
            double gn = norm(f.gradient[i]);
            char buf[64];
            std::snprintf(buf, sizeof buf, " |Du| = %.12g", gn);
            throw NonSpacelikeError("non-spacelike at " + g.node_name(g.interior[i]) + buf);
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// Admissibility report and the Mac-Laurin margin
//   sqrt((n-1)/(2n)) H1 - sqrt(H2) >= 0 on the admissible cone.
// ---------------------------------------------------------------------------

template <int N>
struct AdmissibilityReport {
    bool admissible = false;
    double worst_H1 = 0.0;
    int worst_H1_node = -1;
    double worst_H2 = 0.0;
    int worst_H2_node = -1;
    double mac_laurin_margin = 0.0;
};

inline double mac_laurin_coeff(int n) { return std::sqrt((n - 1.0) / (2.0 * n)); }

template <int N>
inline AdmissibilityReport<N> admissibility(const CurvatureField<N>& f) {
    AdmissibilityReport<N> r;
    const double cn = mac_laurin_coeff(N);
    double h1 = std::numeric_limits<double>::infinity();
    double h2 = std::numeric_limits<double>::infinity();
    double margin = std::numeric_limits<double>::infinity();
    int h1n = -1, h2n = -1;
    for (std::size_t i = 0; i < f.sigma1.size(); ++i) {
        if (f.sigma1[i] < h1) { h1 = f.sigma1[i]; h1n = f.dom->interior[i]; }
        if (f.sigma2[i] < h2) { h2 = f.sigma2[i]; h2n = f.dom->interior[i]; }
        if (f.sigma1[i] > 0 && f.sigma2[i] > 0)
            margin = std::min(margin, cn * f.sigma1[i] - std::sqrt(f.sigma2[i]));
    }
    r.worst_H1 = h1;
    r.worst_H1_node = h1n;
    r.worst_H2 = h2;
    r.worst_H2_node = h2n;
    r.admissible = (h1 > 0.0) && (h2 > 0.0);
    r.mac_laurin_margin = margin;
    return r;
}

// ---------------------------------------------------------------------------
// linearize_sqrtH2 over the whole grid, with the positive-definiteness check
// of the second-order coefficient on the admissible cone.
// ---------------------------------------------------------------------------

template <int N>
struct LinearizedField {
    std::shared_ptr<const GridDomain<N>> dom;
    std::vector<LinearizedNode<N>> node; // per interior slot
};

template <int N>
inline LinearizedField<N> linearize_sqrtH2(const GridFunction<N>& u, double theta = 1e-3) {
    const auto& g = *u.dom;
    LinearizedField<N> out;
    out.dom = u.dom;
    out.node.resize(g.interior.size());
    std::vector<uint8_t> bad(g.interior.size(), 0);
    parallel_for(g.interior.size(), [&](std::size_t i) {
        NodeDerivs<N> d = node_derivs(u, g.interior[i]);
        CurvatureCore<N> c = curvature_core(d, theta);
        if (!c.spacelike || c.H1 <= 0.0 || c.H2 <= 0.0) {
            bad[i] = 1;
            return;
        }
        out.node[i] = linearize_sqrtH2_core(c);
    });
    for (std::size_t i = 0; i < bad.size(); ++i)
        if (bad[i])
            throw ConeViolationError("inadmissible node: " + g.node_name(g.interior[i]));
    return out;
}

// ---------------------------------------------------------------------------
// Slice comparison: for convex spacelike u on an n=3 grid, the mean curvature
// of a 2D coordinate-slice graph never exceeds the mean curvature of the full
// graph at the same point.
// ---------------------------------------------------------------------------

struct SliceSample {
    std::array<int, 3> idx;
    Vec<2> xy;
    double slice_H1;
    double full_H1;
};

inline std::vector<SliceSample> slice_mean_curvature(const GridFunction<3>& u, double slice_coord,
                                                     double theta = 1e-3,
                                                     double convexity_tol = -1e-8) {
    const auto& g = *u.dom;
    u.validate_finite();
    int j3 = int(std::lround((slice_coord + g.radius) / g.spacing));
    if (j3 < 1 || j3 > g.m - 1)
        throw PreconditionError("slice plane does not intersect the domain interior");

    // convexity precheck: smallest Hessian eigenvalue at every interior node
    std::vector<double> minev(g.interior.size());
    parallel_for(g.interior.size(), [&](std::size_t i) {
        NodeDerivs<3> d = node_derivs(u, g.interior[i]);
        Vec<3> ev = sym_eigenvalues(d.hess);
        minev[i] = ev[2];
    });
    for (std::size_t i = 0; i < minev.size(); ++i)
        if (minev[i] < convexity_tol)
            throw PreconditionError("input not convex at " + g.node_name(g.interior[i]));

    std::vector<SliceSample> out;
    for (std::size_t i = 0; i < g.interior.size(); ++i) {
        int p = g.interior[i];
        MultiIndex<3> I = g.multi(p);
        if (I[2] != j3) continue;
        // need in-plane Chebyshev ring fully non-exterior for the 2D stencil
        bool ok = true;
        for (int da = -1; da <= 1 && ok; ++da)
            for (int db = -1; db <= 1 && ok; ++db) {
                MultiIndex<3> J = I;
                J[0] += da;
                J[1] += db;
                if (g.is_exterior(g.lin(J))) ok = false;
            }
        if (!ok) continue;

        // 2D derivatives of the slice function
        NodeDerivs<2> d2;
        const double h = g.spacing;
        const double up = u[p];
        int s0 = g.stride[0], s1 = g.stride[1];
        d2.grad[0] = (u[p + s0] - u[p - s0]) / (2 * h);
        d2.grad[1] = (u[p + s1] - u[p - s1]) / (2 * h);
        d2.hess(0, 0) = (u[p + s0] - 2 * up + u[p - s0]) / (h * h);
        d2.hess(1, 1) = (u[p + s1] - 2 * up + u[p - s1]) / (h * h);
        double mixed = (u[p + s0 + s1] - u[p + s0 - s1] - u[p - s0 + s1] + u[p - s0 - s1]) / (4 * h * h);
        d2.hess(0, 1) = d2.hess(1, 0) = mixed;
        CurvatureCore<2> c2 = curvature_core(d2, theta);
        if (!c2.spacelike)
            throw NonSpacelikeError("non-spacelike slice restriction at " + g.node_name(p));

        NodeDerivs<3> d3 = node_derivs(u, p);
        CurvatureCore<3> c3 = curvature_core(d3, theta);
        if (!c3.spacelike)
            throw NonSpacelikeError("non-spacelike at " + g.node_name(p));

        Vec<3> x = g.coord(I);
        out.push_back({I, {x[0], x[1]}, c2.H1, c3.H1});
    }
    return out;
}

} // namespace mkflow
