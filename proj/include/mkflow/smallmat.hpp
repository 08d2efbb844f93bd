#pragma once
#include <array>
#include <cmath>
#include <algorithm>
#include <cassert>

namespace mkflow {

template <int N> using Vec = std::array<double, N>;

template <int N>
struct Mat {
    std::array<double, N * N> a{};
    double& operator()(int i, int j) { return a[i * N + j]; }
    double operator()(int i, int j) const { return a[i * N + j]; }
    static Mat identity() {
        Mat m;
        for (int i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
};

// ---- vector ops ----
template <int N> inline double dot(const Vec<N>& x, const Vec<N>& y) {
    double s = 0;
    for (int i = 0; i < N; ++i) s += x[i] * y[i];
    return s;
}
template <int N> inline double norm2(const Vec<N>& x) { return dot(x, x); }
template <int N> inline double norm(const Vec<N>& x) { return std::sqrt(norm2(x)); }

template <int N> inline Vec<N> operator+(Vec<N> x, const Vec<N>& y) {
    for (int i = 0; i < N; ++i) x[i] += y[i];
    return x;
}
template <int N> inline Vec<N> operator-(Vec<N> x, const Vec<N>& y) {
    for (int i = 0; i < N; ++i) x[i] -= y[i];
    return x;
}
template <int N> inline Vec<N> operator*(double s, Vec<N> x) {
    for (int i = 0; i < N; ++i) x[i] *= s;
    return x;
}
template <int N> inline Vec<N> normalized(const Vec<N>& x) {
    double n = norm(x);
    Vec<N> y = x;
    for (int i = 0; i < N; ++i) y[i] /= n;
    return y;
}

inline Vec<3> cross(const Vec<3>& a, const Vec<3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// ---- matrix ops ----
template <int N> inline Mat<N> matmul(const Mat<N>& A, const Mat<N>& B) {
    Mat<N> C;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double s = 0;
            for (int k = 0; k < N; ++k) s += A(i, k) * B(k, j);
            C(i, j) = s;
        }
    return C;
}
template <int N> inline Vec<N> matvec(const Mat<N>& A, const Vec<N>& x) {
    Vec<N> y{};
    for (int i = 0; i < N; ++i) {
        double s = 0;
        for (int j = 0; j < N; ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}
template <int N> inline Mat<N> transpose(const Mat<N>& A) {
    Mat<N> T;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) T(i, j) = A(j, i);
    return T;
}
template <int N> inline Mat<N> outer(const Vec<N>& x, const Vec<N>& y) {
    Mat<N> M;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) M(i, j) = x[i] * y[j];
    return M;
}
template <int N> inline double trace(const Mat<N>& A) {
    double s = 0;
    for (int i = 0; i < N; ++i) s += A(i, i);
    return s;
}

// Second elementary symmetric function of the eigenvalues = sum of principal
// 2x2 minors; valid for any square matrix, no eigensolve needed.
template <int N> inline double sigma2_minors(const Mat<N>& A) {
    double s = 0;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) s += A(i, i) * A(j, j) - A(i, j) * A(j, i);
    return s;
}

template <int N> inline double det(const Mat<N>& A);
template <> inline double det<2>(const Mat<2>& A) { return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0); }
template <> inline double det<3>(const Mat<3>& A) {
    return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
           A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
           A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
}

template <int N> inline Mat<N> inverse(const Mat<N>& A);
template <> inline Mat<2> inverse<2>(const Mat<2>& A) {
    double d = det<2>(A);
    Mat<2> I;
    I(0, 0) = A(1, 1) / d;
    I(0, 1) = -A(0, 1) / d;
    I(1, 0) = -A(1, 0) / d;
    I(1, 1) = A(0, 0) / d;
    return I;
}
template <> inline Mat<3> inverse<3>(const Mat<3>& A) {
    double d = det<3>(A);
    Mat<3> I;
    I(0, 0) = (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) / d;
    I(0, 1) = (A(0, 2) * A(2, 1) - A(0, 1) * A(2, 2)) / d;
    I(0, 2) = (A(0, 1) * A(1, 2) - A(0, 2) * A(1, 1)) / d;
    I(1, 0) = (A(1, 2) * A(2, 0) - A(1, 0) * A(2, 2)) / d;
    I(1, 1) = (A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0)) / d;
    I(1, 2) = (A(0, 2) * A(1, 0) - A(0, 0) * A(1, 2)) / d;
    I(2, 0) = (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0)) / d;
    I(2, 1) = (A(0, 1) * A(2, 0) - A(0, 0) * A(2, 1)) / d;
    I(2, 2) = (A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0)) / d;
    return I;
}

// Solve A x = b for small dense A (partial-pivot elimination, deterministic).
template <int N> inline Vec<N> solve(Mat<N> A, Vec<N> b) {
    for (int c = 0; c < N; ++c) {
        int piv = c;
        for (int r = c + 1; r < N; ++r)
            if (std::fabs(A(r, c)) > std::fabs(A(piv, c))) piv = r;
        if (piv != c) {
            for (int j = 0; j < N; ++j) std::swap(A(c, j), A(piv, j));
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < N; ++r) {
            double f = A(r, c) / A(c, c);
            for (int j = c; j < N; ++j) A(r, j) -= f * A(c, j);
            b[r] -= f * b[c];
        }
    }
    Vec<N> x{};
    for (int r = N - 1; r >= 0; --r) {
        double s = b[r];
        for (int j = r + 1; j < N; ++j) s -= A(r, j) * x[j];
        x[r] = s / A(r, r);
    }
    return x;
}

// ---- closed-form symmetric eigenvalues, sorted descending ----
inline Vec<2> sym_eigenvalues(const Mat<2>& A) {
    double m = 0.5 * (A(0, 0) + A(1, 1));
    double d = 0.5 * (A(0, 0) - A(1, 1));
    double off = 0.5 * (A(0, 1) + A(1, 0));
    double r = std::sqrt(d * d + off * off);
    return {m + r, m - r};
}

inline Vec<3> sym_eigenvalues(const Mat<3>& A) {
    double a01 = 0.5 * (A(0, 1) + A(1, 0));
    double a02 = 0.5 * (A(0, 2) + A(2, 0));
    double a12 = 0.5 * (A(1, 2) + A(2, 1));
    double p1 = a01 * a01 + a02 * a02 + a12 * a12;
    Vec<3> eig;
    if (p1 <= 0.0) {
        eig = {A(0, 0), A(1, 1), A(2, 2)};
    } else {
        double q = (A(0, 0) + A(1, 1) + A(2, 2)) / 3.0;
        double d0 = A(0, 0) - q, d1 = A(1, 1) - q, d2 = A(2, 2) - q;
        double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * p1;
        double p = std::sqrt(p2 / 6.0);
        Mat<3> B;
        B(0, 0) = d0 / p; B(1, 1) = d1 / p; B(2, 2) = d2 / p;
        B(0, 1) = B(1, 0) = a01 / p;
        B(0, 2) = B(2, 0) = a02 / p;
        B(1, 2) = B(2, 1) = a12 / p;
        double r = std::clamp(0.5 * det<3>(B), -1.0, 1.0);
        double phi = std::acos(r) / 3.0;
        double e0 = q + 2.0 * p * std::cos(phi);
        double e2 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        double e1 = 3.0 * q - e0 - e2;
        eig = {e0, e1, e2};
    }
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

// Roots of the characteristic polynomial of a (real-eigenvalue) matrix,
// sorted descending. Used to cross-check the symmetric-conjugate route.
inline Vec<2> real_eigenvalues(const Mat<2>& A) {
    double m = 0.5 * (A(0, 0) + A(1, 1));
    double disc = 0.25 * (A(0, 0) - A(1, 1)) * (A(0, 0) - A(1, 1)) + A(0, 1) * A(1, 0);
    double r = std::sqrt(std::max(disc, 0.0));
    return {m + r, m - r};
}

inline Vec<3> real_eigenvalues(const Mat<3>& A) {
    double c2 = trace(A);
    double c1 = sigma2_minors(A);
    double c0 = det<3>(A);
    // lambda^3 - c2 l^2 + c1 l - c0; depress with l = t + c2/3
    double p = c1 - c2 * c2 / 3.0;
    double q = -2.0 * c2 * c2 * c2 / 27.0 + c2 * c1 / 3.0 - c0;
    Vec<3> eig;
    double mp = std::sqrt(std::max(-p / 3.0, 0.0));
    if (mp <= 0.0) {
        double t = std::cbrt(-q);
        eig = {t + c2 / 3.0, t + c2 / 3.0, t + c2 / 3.0};
    } else {
        double arg = std::clamp(3.0 * q / (2.0 * p * mp), -1.0, 1.0);
        double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            eig[k] = 2.0 * mp * std::cos(phi - 2.0 * M_PI * k / 3.0) + c2 / 3.0;
    }
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

} // namespace mkflow
