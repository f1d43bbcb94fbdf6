// Deterministic pencil with the maximal number of symmetroid nodes:
// A(x) = diag(L_1(x), ..., L_n(x)) + L_{n+1}(x) ee^T for generic linear
// forms L_i on R^4. Each triple of forms vanishes on a line, and the two
// unit vectors on that line are corank-2 points of A, giving
// 2*C(n+1,3) = n(n+1)(n-1)/3 nodes.

#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/pencil.hpp"
#include "spectra/rng.hpp"
#include "spectra/sym_matrix.hpp"

namespace spectra {

struct DetConstruction {
    int n = 0;
    std::vector<std::array<double, 4>> forms;  // n+1 linear forms in (x_0..x_3)
};

namespace detail {

inline double eval_form(const std::array<double, 4>& form, const std::array<double, 4>& x) {
    return form[0] * x[0] + form[1] * x[1] + form[2] * x[2] + form[3] * x[3];
}

inline double det3(double a00, double a01, double a02, double a10, double a11, double a12,
                   double a20, double a21, double a22) {
    return a00 * (a11 * a22 - a12 * a21) - a01 * (a10 * a22 - a12 * a20) +
           a02 * (a10 * a21 - a11 * a20);
}

/// Kernel direction of three linear forms: the vector of signed 3x3 minors
/// of the 3x4 coefficient matrix (the 4-dimensional cross product).
inline std::array<double, 4> triple_kernel(const std::array<double, 4>& a,
                                           const std::array<double, 4>& b,
                                           const std::array<double, 4>& c) {
    std::array<double, 4> z{};
    z[0] = det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3]);
    z[1] = -det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3]);
    z[2] = det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3]);
    z[3] = -det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2]);
    return z;
}

inline double det4(const std::array<double, 4>& a, const std::array<double, 4>& b,
                   const std::array<double, 4>& c, const std::array<double, 4>& d) {
    // Laplace expansion along the first row: triple_kernel already carries
    // the cofactor signs, so the determinant is a plain dot product.
    const std::array<double, 4> z = triple_kernel(b, c, d);
    return a[0] * z[0] + a[1] * z[1] + a[2] * z[2] + a[3] * z[3];
}

inline double norm4(const std::array<double, 4>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

} // namespace detail

/// Genericity: every 3 forms linearly independent (their kernel is a line)
/// and every 4 forms with only the trivial common zero.
inline bool construction_is_generic(const std::vector<std::array<double, 4>>& forms,
                                    double rel_tol = 1e-8) {
    const std::size_t m = forms.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                const auto z = detail::triple_kernel(forms[i], forms[j], forms[k]);
                const double scale =
                    detail::norm4(forms[i]) * detail::norm4(forms[j]) * detail::norm4(forms[k]);
                if (detail::norm4(z) <= rel_tol * scale) return false;
                for (std::size_t l = k + 1; l < m; ++l) {
                    const double d = detail::det4(forms[i], forms[j], forms[k], forms[l]);
                    if (std::abs(d) <= rel_tol * scale * detail::norm4(forms[l])) return false;
                }
            }
        }
    }
    return true;
}

inline DetConstruction make_det_construction(int n, std::vector<std::array<double, 4>> forms) {
    if (n < 2) throw std::invalid_argument("make_det_construction: need n >= 2");
    if (forms.size() != static_cast<std::size_t>(n) + 1)
        throw std::invalid_argument("make_det_construction: need exactly n+1 forms");
    if (!construction_is_generic(forms))
        throw std::invalid_argument("make_det_construction: forms fail the genericity check");
    DetConstruction c;
    c.n = n;
    c.forms = std::move(forms);
    return c;
}

/// Random generic construction; Gaussian forms are generic with probability
/// one, and the check guards against freak draws with bounded retries.
inline DetConstruction det_construction(int n, const RngStream& stream) {
    if (n < 2) throw std::invalid_argument("det_construction: need n >= 2");
    for (int attempt = 0; attempt < 32; ++attempt) {
        RngEngine rng(stream.child(static_cast<std::uint64_t>(attempt)));
        std::vector<std::array<double, 4>> forms(static_cast<std::size_t>(n) + 1);
        for (auto& f : forms) {
            for (double& coef : f) coef = rng.normal();
        }
        if (construction_is_generic(forms)) return make_det_construction(n, std::move(forms));
    }
    throw std::runtime_error("det_construction: no generic draw in 32 attempts");
}

/// The matrix diag(L_1(x), ..., L_n(x)) + L_{n+1}(x) ee^T.
inline SymMatrix construction_matrix(const DetConstruction& c, const std::array<double, 4>& x) {
    SymMatrix a(c.n);
    const double rank_one = detail::eval_form(c.forms[static_cast<std::size_t>(c.n)], x);
    for (int i = 0; i < c.n; ++i) {
        for (int j = i; j < c.n; ++j) a.set(i, j, rank_one);
        a.add(i, i, detail::eval_form(c.forms[static_cast<std::size_t>(i)], x));
    }
    return a;
}

/// Rank-one update determinant rule for this pencil:
/// det A(x) = sum over i of the product of all other forms at x.
inline double construction_det_formula(const DetConstruction& c, const std::array<double, 4>& x) {
    std::vector<double> vals(c.forms.size());
    for (std::size_t i = 0; i < c.forms.size(); ++i) vals[i] = detail::eval_form(c.forms[i], x);
    double total = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < vals.size(); ++j) {
            if (j != i) prod *= vals[j];
        }
        total += prod;
    }
    return total;
}

/// Determinant of the construction matrix from its spectrum.
inline double construction_det_direct(const DetConstruction& c, const std::array<double, 4>& x) {
    const auto vals = eigenvalues_sym(construction_matrix(c, x));
    double det = 1.0;
    for (double v : vals) det *= v;
    return det;
}

/// All 2*C(n+1,3) singular points of the construction on S^3: for each
/// triple of forms, the two unit vectors spanning its common kernel. Each
/// point is verified to carry det A = 0 and corank >= 2.
inline std::vector<SpherePoint> enumerate_construction_nodes(const DetConstruction& c,
                                                             double corank_tol = 1e-6) {
    std::vector<SpherePoint> nodes;
    const std::size_t m = c.forms.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            for (std::size_t k = j + 1; k < m; ++k) {
                std::array<double, 4> z = detail::triple_kernel(c.forms[i], c.forms[j], c.forms[k]);
                const double zn = detail::norm4(z);
                const double scale =
                    detail::norm4(c.forms[i]) * detail::norm4(c.forms[j]) * detail::norm4(c.forms[k]);
                if (zn <= 1e-12 * scale)
                    throw std::runtime_error("enumerate_construction_nodes: rank-deficient triple");
                for (double& v : z) v /= zn;
                for (int sign = 0; sign < 2; ++sign) {
                    const std::array<double, 4> point =
                        sign == 0 ? z : std::array<double, 4>{-z[0], -z[1], -z[2], -z[3]};
                    const SymMatrix a = construction_matrix(c, point);
                    const auto vals = eigenvalues_sym(a);
                    if (corank(vals, corank_tol) < 2)
                        throw std::runtime_error("enumerate_construction_nodes: node fails corank check");
                    double det = 1.0;
                    for (double v : vals) det *= v;
                    const double fn = a.frobenius_norm();
                    if (std::abs(det) > 1e-10 * std::max(1.0, std::pow(fn, c.n)))
                        throw std::runtime_error("enumerate_construction_nodes: node fails det check");
                    nodes.emplace_back(
                        SpherePoint::normalized({point[0], point[1], point[2], point[3]}));
                }
            }
        }
    }
    return nodes;
}

/// The node count of the construction: n(n+1)(n-1)/3.
inline long long construction_node_count(int n) {
    if (n < 2) throw std::invalid_argument("construction_node_count: need n >= 2");
    return static_cast<long long>(n) * (n + 1) * (n - 1) / 3;
}

} // namespace spectra
