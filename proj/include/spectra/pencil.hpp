// The random spectrahedron datum: a list of symmetric matrices Q_1..Q_ell
// defining A(x) = x_0*I + (x_1 Q_1 + ... + x_ell Q_ell)/sqrt(2*n*ell) for x
// on the unit sphere of R^{ell+1}, plus uniform sphere sampling and the PSD
// membership test.

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/goe.hpp"
#include "spectra/rng.hpp"
#include "spectra/sym_matrix.hpp"

namespace spectra {

struct SpherePoint {
    std::vector<double> coords;

    SpherePoint() = default;

    explicit SpherePoint(std::vector<double> c) : coords(std::move(c)) {
        const double n = norm();
        if (std::abs(n - 1.0) > 1e-12)
            throw std::invalid_argument("SpherePoint: coordinates must have unit norm");
    }

    /// Normalizes the given vector; rejects (near-)zero input.
    static SpherePoint normalized(std::vector<double> c) {
        double s = 0.0;
        for (double v : c) s += v * v;
        const double n = std::sqrt(s);
        if (!(n > 0.0) || !std::isfinite(n))
            throw std::invalid_argument("SpherePoint: cannot normalize zero or non-finite vector");
        for (double& v : c) v /= n;
        SpherePoint p;
        p.coords = std::move(c);
        return p;
    }

    [[nodiscard]] std::size_t dim_ambient() const noexcept { return coords.size(); }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (double v : coords) s += v * v;
        return std::sqrt(s);
    }

    [[nodiscard]] double operator[](std::size_t i) const { return coords[i]; }

    [[nodiscard]] SpherePoint antipode() const {
        SpherePoint p;
        p.coords = coords;
        for (double& v : p.coords) v = -v;
        return p;
    }
};

struct Pencil {
    int n = 0;
    int ell = 0;
    std::vector<SymMatrix> Q;
    std::optional<RngStream> seed_provenance;

    Pencil() = default;

    Pencil(int n_, int ell_, std::vector<SymMatrix> q,
           std::optional<RngStream> provenance = std::nullopt)
        : n(n_), ell(ell_), Q(std::move(q)), seed_provenance(provenance) {
        if (n < 1 || ell < 1) throw std::invalid_argument("Pencil: need n >= 1 and ell >= 1");
        if (Q.size() != static_cast<std::size_t>(ell))
            throw std::invalid_argument("Pencil: matrix count must equal ell");
        for (const auto& q_i : Q) {
            if (q_i.dim() != n) throw std::invalid_argument("Pencil: all matrices must have dimension n");
        }
    }

    /// The normalization 1/sqrt(2*n*ell), recomputed so it cannot drift.
    [[nodiscard]] double scale() const { return 1.0 / std::sqrt(2.0 * n * ell); }
};

/// Uniform point on the sphere S^dim (dim+1 coordinates) via a normalized
/// Gaussian vector; the measure-zero all-zero draw is retried.
inline SpherePoint sample_sphere(int dim, RngEngine& rng) {
    if (dim < 1) throw std::invalid_argument("sample_sphere: dimension must be >= 1");
    for (;;) {
        std::vector<double> c(static_cast<std::size_t>(dim) + 1);
        double s = 0.0;
        for (double& v : c) {
            v = rng.normal();
            s += v * v;
        }
        if (s > 0.0) {
            const double inv = 1.0 / std::sqrt(s);
            for (double& v : c) v *= inv;
            SpherePoint p;
            p.coords = std::move(c);
            return p;
        }
    }
}

inline SpherePoint sample_sphere(int dim, const RngStream& stream) {
    RngEngine rng(stream);
    return sample_sphere(dim, rng);
}

inline Pencil sample_pencil(int n, int ell, const RngStream& stream) {
    if (n < 1 || ell < 1) throw std::invalid_argument("sample_pencil: need n >= 1 and ell >= 1");
    std::vector<SymMatrix> q;
    q.reserve(static_cast<std::size_t>(ell));
    for (int i = 0; i < ell; ++i) q.push_back(goe_sample(n, stream.child(static_cast<std::uint64_t>(i))));
    return Pencil(n, ell, std::move(q), stream);
}

/// A(x) = x_0*I + scale * sum_i x_i Q_i for x on S^ell.
inline SymMatrix eval_A(const Pencil& p, const SpherePoint& x) {
    if (x.dim_ambient() != static_cast<std::size_t>(p.ell) + 1)
        throw std::invalid_argument("eval_A: point must have ell+1 coordinates");
    SymMatrix a(p.n);
    for (int i = 0; i < p.n; ++i) a.set(i, i, x[0]);
    const double s = p.scale();
    for (int k = 0; k < p.ell; ++k) a.axpy(s * x[static_cast<std::size_t>(k) + 1], p.Q[static_cast<std::size_t>(k)]);
    return a;
}

/// Unscaled Q(d) = sum_i d_i Q_i for a direction d on S^{ell-1}. Eigenvalue
/// coincidences of Q(d) are invariant under the omitted scale factor.
inline SymMatrix direction_Q(const Pencil& p, const SpherePoint& d) {
    if (d.dim_ambient() != static_cast<std::size_t>(p.ell))
        throw std::invalid_argument("direction_Q: direction must have ell coordinates");
    SymMatrix q(p.n);
    for (int k = 0; k < p.ell; ++k) q.axpy(d[static_cast<std::size_t>(k)], p.Q[static_cast<std::size_t>(k)]);
    return q;
}

/// PSD test: lambda_min(A(x)) >= -tol * max(1, ||A(x)||_F).
inline bool membership(const Pencil& p, const SpherePoint& x, double tol = 1e-12) {
    const SymMatrix a = eval_A(p, x);
    return lambda_min(a) >= -tol * std::max(1.0, a.frobenius_norm());
}

/// Pencil with all Q_i = 0; its spectrahedron is the hemisphere {x_0 >= 0}.
inline Pencil zero_pencil(int n, int ell) {
    std::vector<SymMatrix> q(static_cast<std::size_t>(ell), SymMatrix(n));
    return Pencil(n, ell, std::move(q));
}

} // namespace spectra
