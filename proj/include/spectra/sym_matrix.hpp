// Dense real symmetric matrix, stored as the upper triangle in row-major
// order. Symmetry holds by construction; there is no way to store an
// asymmetric value.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace spectra {

class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(int n) : n_(n), tri_(triangle_size(n), 0.0) {
        if (n < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    }

    SymMatrix(int n, std::vector<double> upper_triangle) : n_(n), tri_(std::move(upper_triangle)) {
        if (n < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
        if (tri_.size() != triangle_size(n))
            throw std::invalid_argument("SymMatrix: triangle size does not match dimension");
    }

    static std::size_t triangle_size(int n) {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
    }

    static SymMatrix identity(int n) {
        SymMatrix m(n);
        for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
        return m;
    }

    static SymMatrix diagonal(const std::vector<double>& d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.n_; ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
        return m;
    }

    [[nodiscard]] int dim() const noexcept { return n_; }

    [[nodiscard]] double operator()(int i, int j) const {
        return tri_[index(i, j)];
    }

    void set(int i, int j, double v) { tri_[index(i, j)] = v; }

    void add(int i, int j, double v) { tri_[index(i, j)] += v; }

    [[nodiscard]] const std::vector<double>& triangle() const noexcept { return tri_; }

    [[nodiscard]] double trace() const {
        double t = 0.0;
        for (int i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

    [[nodiscard]] double frobenius_norm() const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j < n_; ++j) {
                const double v = (*this)(i, j);
                s += (i == j) ? v * v : 2.0 * v * v;
            }
        }
        return std::sqrt(s);
    }

    [[nodiscard]] bool all_finite() const noexcept {
        for (double v : tri_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

    SymMatrix& operator+=(const SymMatrix& other) {
        require_same_dim(other);
        for (std::size_t k = 0; k < tri_.size(); ++k) tri_[k] += other.tri_[k];
        return *this;
    }

    SymMatrix& operator*=(double s) noexcept {
        for (double& v : tri_) v *= s;
        return *this;
    }

    /// this += s * other
    void axpy(double s, const SymMatrix& other) {
        require_same_dim(other);
        for (std::size_t k = 0; k < tri_.size(); ++k) tri_[k] += s * other.tri_[k];
    }

    /// Full dense n*n copy, row-major.
    [[nodiscard]] std::vector<double> to_dense() const {
        std::vector<double> a(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            for (int j = i; j < n_; ++j) {
                const double v = (*this)(i, j);
                a[static_cast<std::size_t>(i) * n_ + j] = v;
                a[static_cast<std::size_t>(j) * n_ + i] = v;
            }
        }
        return a;
    }

    /// Quadratic form u^T M v for vectors of length n.
    [[nodiscard]] double quadratic_form(const double* u, const double* v) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) {
            double row = 0.0;
            for (int j = 0; j < n_; ++j) row += (*this)(i, j) * v[j];
            s += u[i] * row;
        }
        return s;
    }

private:
    [[nodiscard]] std::size_t index(int i, int j) const {
        if (i > j) std::swap(i, j);
        if (i < 0 || j >= n_) throw std::out_of_range("SymMatrix: index out of range");
        return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i - 1) / 2
             + static_cast<std::size_t>(j - i);
    }

    void require_same_dim(const SymMatrix& other) const {
        if (other.n_ != n_) throw std::invalid_argument("SymMatrix: dimension mismatch");
    }

    int n_ = 0;
    std::vector<double> tri_;
};

inline SymMatrix operator+(SymMatrix a, const SymMatrix& b) {
    a += b;
    return a;
}

inline SymMatrix operator*(double s, SymMatrix m) {
    m *= s;
    return m;
}

} // namespace spectra
