// Symmetric eigensolver: Householder reduction to tridiagonal form followed
// by the implicit QL iteration with Wilkinson shifts. Two entry points, one
// that accumulates eigenvectors and a cheaper values-only path for Monte
// Carlo loops. Eigenvalues are always returned in ascending order.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spectra/sym_matrix.hpp"

namespace spectra {

struct EigenSystem {
    int n = 0;
    std::vector<double> values;    // ascending
    std::vector<double> vectors;   // row-major n*n; vector(i,k) = component i of eigenvector k

    [[nodiscard]] double vector(int i, int k) const {
        return vectors[static_cast<std::size_t>(i) * n + k];
    }
};

namespace detail {

// Householder reduction of the dense symmetric matrix held in z (row-major)
// to tridiagonal form with diagonal d and subdiagonal e (e[0] unused). When
// accumulate is set, z is overwritten with the orthogonal transformation.
inline void householder_tridiag(std::vector<double>& z, int n, std::vector<double>& d,
                                std::vector<double>& e, bool accumulate) {
    auto at = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };
    for (int i = n - 1; i > 0; --i) {
        const int l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    if (accumulate) at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    const double gj = e[j] - hh * f;
                    e[j] = gj;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + gj * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    if (accumulate) d[0] = 0.0;
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) {
        if (accumulate) {
            if (d[i] != 0.0) {
                for (int j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (int k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                    for (int k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
                }
            }
            d[i] = at(i, i);
            at(i, i) = 1.0;
            for (int j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
        } else {
            d[i] = at(i, i);
        }
    }
}

// Implicit QL with shifts on the tridiagonal (d, e). Rotations are applied
// to the columns of z when accumulate is set.
inline void tridiag_ql(std::vector<double>& d, std::vector<double>& e, int n,
                       std::vector<double>& z, bool accumulate) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto at = [&](int i, int j) -> double& { return z[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("symmetric eigensolver: QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (accumulate) {
                        for (int k = 0; k < n; ++k) {
                            f = at(k, i + 1);
                            at(k, i + 1) = s * at(k, i) + c * f;
                            at(k, i) = c * at(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

} // namespace detail

/// Full eigendecomposition. Eigenvalues ascending, eigenvector k in column k.
inline EigenSystem eigh_sym(const SymMatrix& a) {
    if (!a.all_finite()) throw std::invalid_argument("eigh_sym: matrix has non-finite entries");
    const int n = a.dim();
    EigenSystem sys;
    sys.n = n;
    sys.vectors = a.to_dense();
    sys.values.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    detail::householder_tridiag(sys.vectors, n, sys.values, e, true);
    detail::tridiag_ql(sys.values, e, n, sys.vectors, true);

    // Sort ascending, permuting eigenvector columns to match.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int p, int q) { return sys.values[static_cast<std::size_t>(p)] < sys.values[static_cast<std::size_t>(q)]; });
    std::vector<double> sorted_vals(static_cast<std::size_t>(n));
    std::vector<double> sorted_vecs(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        const int src = order[static_cast<std::size_t>(k)];
        sorted_vals[static_cast<std::size_t>(k)] = sys.values[static_cast<std::size_t>(src)];
        for (int i = 0; i < n; ++i)
            sorted_vecs[static_cast<std::size_t>(i) * n + k] = sys.vectors[static_cast<std::size_t>(i) * n + src];
    }
    sys.values = std::move(sorted_vals);
    sys.vectors = std::move(sorted_vecs);
    return sys;
}

/// Eigenvalues only, ascending. Skips eigenvector accumulation.
inline std::vector<double> eigenvalues_sym(const SymMatrix& a) {
    if (!a.all_finite()) throw std::invalid_argument("eigenvalues_sym: matrix has non-finite entries");
    const int n = a.dim();
    std::vector<double> z = a.to_dense();
    std::vector<double> d(static_cast<std::size_t>(n), 0.0);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    detail::householder_tridiag(z, n, d, e, false);
    detail::tridiag_ql(d, e, n, z, false);
    std::sort(d.begin(), d.end());
    return d;
}

inline double lambda_min(const SymMatrix& a) {
    return eigenvalues_sym(a).front();
}

/// Smallest eigenvalue rescaled by 1/sqrt(2n), the normalization under which
/// it concentrates at -1 for large matrices.
inline double lambda_min_scaled(const SymMatrix& a) {
    return lambda_min(a) / std::sqrt(2.0 * a.dim());
}

/// Number of eigenvalues equal to zero up to a tolerance relative to the
/// Frobenius norm of the matrix (recovered from the spectrum), floored at 1
/// so near-zero matrices are not held to an impossibly tight cutoff. A matrix
/// that is exactly zero has full corank.
inline int corank(const std::vector<double>& values, double rel_tol = 1e-8) {
    if (values.empty()) throw std::invalid_argument("corank: empty spectrum");
    double sq = 0.0;
    for (double v : values) sq += v * v;
    const double tol = rel_tol * std::max(1.0, std::sqrt(sq));
    int c = 0;
    for (double v : values) {
        if (std::abs(v) <= tol) ++c;
    }
    return c;
}

/// Consecutive differences of an ascending spectrum.
inline std::vector<double> spectral_gaps(const std::vector<double>& values) {
    if (values.size() < 2) throw std::invalid_argument("spectral_gaps: need at least two eigenvalues");
    std::vector<double> g(values.size() - 1);
    for (std::size_t i = 0; i + 1 < values.size(); ++i) g[i] = values[i + 1] - values[i];
    return g;
}

inline double min_gap(const std::vector<double>& values) {
    const auto g = spectral_gaps(values);
    return *std::min_element(g.begin(), g.end());
}

} // namespace spectra
