// Singular points of the symmetroid for three-matrix pencils. A direction
// x on S^2 where Q(x) = x_1 Q_1 + x_2 Q_2 + x_3 Q_3 has a repeated
// eigenvalue lifts to a corank-2 point of the pencil on S^3, and every
// singular point arises this way. The counting pipeline scans the minimal
// eigenvalue gap on a Fibonacci lattice, refines each captured dip by gap
// descent followed by a frozen-eigenvector Newton iteration, clusters the
// refined zeros, and classifies each by its coincident pair (the lowest
// pair lies on the spectrahedron boundary).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spectra/eigen_sym.hpp"
#include "spectra/parallel.hpp"
#include "spectra/pencil.hpp"

namespace spectra {

struct NodeSearchConfig {
    int lattice_points = 40000;
    double capture_factor = 5.0;       // threshold = factor * median neighbor gap variation
    double cluster_radius = 1e-4;      // radians; merge refined zeros closer than this
    double newton_switch_rel = 1e-3;   // switch descent -> Newton once gap < this * ||Q(x)||_F
    double target_gap_rel = 1e-10;     // converged once gap <= this * ||Q(x)||_F
    double initial_reject_rel = 0.25;  // reject starts with gap > this * ||Q(x)||_F
    int max_descent_iters = 200;
    int max_newton_iters = 60;
    int workers = 0;
};

struct SingularPointRecord {
    std::array<double, 3> direction{};
    int pair_index = 0;  // 1-based: eigenvalues pair_index and pair_index+1 of Q(direction) coincide
    double refined_gap = 0.0;
    std::array<double, 4> s3_point{};
    bool on_boundary = false;
};

enum class RefineStatus { Converged, Rejected, NoConvergence };

struct RefineResult {
    RefineStatus status = RefineStatus::NoConvergence;
    SingularPointRecord record;       // meaningful only when status is Converged
    std::vector<double> gap_history;  // gap at the start of each Newton step, then at convergence
};

struct CountReport {
    int rho = 0;
    int sigma = 0;
    std::vector<SingularPointRecord> records;
    std::vector<std::string> flags;
    bool inconclusive = false;
    NodeSearchConfig config;
    int candidates = 0;
};

namespace detail {

struct SphereLattice {
    int size = 0;
    std::vector<std::array<double, 3>> points;
    std::vector<std::vector<std::int32_t>> neighbors;
};

/// Fibonacci sphere lattice with neighbor lists (points within 1.6x the mean
/// lattice spacing), built once per size and cached.
inline const SphereLattice& fibonacci_lattice(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<SphereLattice>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto lat = std::make_unique<SphereLattice>();
    lat->size = n;
    lat->points.resize(static_cast<std::size_t>(n));
    const double pi = std::acos(-1.0);
    const double golden_angle = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * i;
        lat->points[static_cast<std::size_t>(i)] = {r * std::cos(phi), r * std::sin(phi), z};
    }

    const double spacing = std::sqrt(4.0 * pi / n);
    const double radius = 1.6 * spacing;
    const double r2 = radius * radius;
    const int cells = std::max(1, static_cast<int>(std::floor(2.0 / radius)));
    const double cell = 2.0 / cells;
    auto cell_of = [&](double v) {
        int c = static_cast<int>(std::floor((v + 1.0) / cell));
        return std::clamp(c, 0, cells - 1);
    };
    std::vector<std::vector<std::int32_t>> buckets(
        static_cast<std::size_t>(cells) * cells * cells);
    auto bucket_index = [&](int ix, int iy, int iz) {
        return (static_cast<std::size_t>(ix) * cells + iy) * cells + iz;
    };
    for (int i = 0; i < n; ++i) {
        const auto& p = lat->points[static_cast<std::size_t>(i)];
        buckets[bucket_index(cell_of(p[0]), cell_of(p[1]), cell_of(p[2]))].push_back(i);
    }
    lat->neighbors.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& p = lat->points[static_cast<std::size_t>(i)];
        const int cx = cell_of(p[0]);
        const int cy = cell_of(p[1]);
        const int cz = cell_of(p[2]);
        auto& nb = lat->neighbors[static_cast<std::size_t>(i)];
        for (int dx = -1; dx <= 1; ++dx) {
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dz = -1; dz <= 1; ++dz) {
                    const int ix = cx + dx;
                    const int iy = cy + dy;
                    const int iz = cz + dz;
                    if (ix < 0 || iy < 0 || iz < 0 || ix >= cells || iy >= cells || iz >= cells)
                        continue;
                    for (std::int32_t j : buckets[bucket_index(ix, iy, iz)]) {
                        if (j == i) continue;
                        const auto& q = lat->points[static_cast<std::size_t>(j)];
                        const double d0 = p[0] - q[0];
                        const double d1 = p[1] - q[1];
                        const double d2 = p[2] - q[2];
                        if (d0 * d0 + d1 * d1 + d2 * d2 <= r2) nb.push_back(j);
                    }
                }
            }
        }
    }
    auto& ref = *lat;
    cache.emplace(n, std::move(lat));
    return ref;
}

inline SymMatrix q_at(const Pencil& p, const std::array<double, 3>& x) {
    SymMatrix q(p.n);
    for (int k = 0; k < 3; ++k) q.axpy(x[static_cast<std::size_t>(k)], p.Q[static_cast<std::size_t>(k)]);
    return q;
}

inline void normalize3(std::array<double, 3>& x) {
    const double s = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    x[0] /= s;
    x[1] /= s;
    x[2] /= s;
}

inline double chord_dist(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double d0 = a[0] - b[0];
    const double d1 = a[1] - b[1];
    const double d2 = a[2] - b[2];
    return std::sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

/// Orthonormal tangent basis (e1, e2) at a unit vector x.
inline void tangent_basis(const std::array<double, 3>& x, std::array<double, 3>& e1,
                          std::array<double, 3>& e2) {
    int k = 0;
    if (std::abs(x[1]) < std::abs(x[k])) k = 1;
    if (std::abs(x[2]) < std::abs(x[k])) k = 2;
    e1 = {0.0, 0.0, 0.0};
    e1[static_cast<std::size_t>(k)] = 1.0;
    const double d = e1[0] * x[0] + e1[1] * x[1] + e1[2] * x[2];
    for (int i = 0; i < 3; ++i) e1[static_cast<std::size_t>(i)] -= d * x[static_cast<std::size_t>(i)];
    normalize3(e1);
    e2 = {x[1] * e1[2] - x[2] * e1[1], x[2] * e1[0] - x[0] * e1[2], x[0] * e1[1] - x[1] * e1[0]};
}

/// Index (1-based) of the smallest consecutive gap of an ascending spectrum.
inline int argmin_gap_pair(const std::vector<double>& values, double* gap_out = nullptr) {
    int pair = 1;
    double best = values[1] - values[0];
    for (std::size_t i = 2; i < values.size(); ++i) {
        const double g = values[i] - values[i - 1];
        if (g < best) {
            best = g;
            pair = static_cast<int>(i);
        }
    }
    if (gap_out) *gap_out = best;
    return pair;
}

} // namespace detail

/// Lift of a coincidence direction to the sphere of the full pencil: with
/// lambda the coincident eigenvalue of the rescaled R(x), the point
/// (-lambda, x_1, x_2, x_3)/sqrt(1+lambda^2) carries a double zero
/// eigenvalue of A.
inline SpherePoint lift_to_sphere3(const std::array<double, 3>& direction,
                                   const std::vector<double>& r_eigenvalues, int pair_index) {
    if (pair_index < 1 || static_cast<std::size_t>(pair_index) >= r_eigenvalues.size())
        throw std::invalid_argument("lift_to_sphere3: pair index out of range");
    const double lambda = 0.5 * (r_eigenvalues[static_cast<std::size_t>(pair_index) - 1] +
                                 r_eigenvalues[static_cast<std::size_t>(pair_index)]);
    return SpherePoint::normalized({-lambda, direction[0], direction[1], direction[2]});
}

/// Polishes a candidate coincidence: projected-gradient descent on the gap
/// while it is conical, then Newton on the frozen-eigenvector system
/// F(x) = (u^T Q(x) u - v^T Q(x) v, u^T Q(x) v) in a tangent chart, which is
/// smooth near the coincidence and converges quadratically.
inline RefineResult refine_zero(const Pencil& p, const std::array<double, 3>& x0, int pair,
                                const NodeSearchConfig& cfg = {}) {
    if (p.ell != 3) throw std::invalid_argument("refine_zero: pencil must have ell = 3");
    if (pair < 1 || pair >= p.n) throw std::invalid_argument("refine_zero: pair index out of range");
    RefineResult result;
    std::array<double, 3> x = x0;
    detail::normalize3(x);

    const int lo = pair - 1;  // 0-based indices of the coincident pair
    const int hi = pair;

    {
        const SymMatrix q = detail::q_at(p, x);
        const auto vals = eigenvalues_sym(q);
        const double gap = vals[static_cast<std::size_t>(hi)] - vals[static_cast<std::size_t>(lo)];
        if (gap > cfg.initial_reject_rel * q.frobenius_norm()) {
            result.status = RefineStatus::Rejected;
            return result;
        }
    }

    // Stage 1: descend the gap until it is small enough for the Newton
    // system. The gap has a conical minimum at the coincidence, so plain
    // descent with backtracking is used; a stall at a positive value means
    // an avoided crossing, not a zero.
    std::vector<double> u(static_cast<std::size_t>(p.n));
    std::vector<double> v(static_cast<std::size_t>(p.n));
    bool in_newton_range = false;
    for (int it = 0; it < cfg.max_descent_iters; ++it) {
        const SymMatrix q = detail::q_at(p, x);
        const double qnorm = q.frobenius_norm();
        const EigenSystem sys = eigh_sym(q);
        const double gap = sys.values[static_cast<std::size_t>(hi)] - sys.values[static_cast<std::size_t>(lo)];
        if (gap < cfg.newton_switch_rel * qnorm) {
            in_newton_range = true;
            break;
        }
        for (int i = 0; i < p.n; ++i) {
            u[static_cast<std::size_t>(i)] = sys.vector(i, lo);
            v[static_cast<std::size_t>(i)] = sys.vector(i, hi);
        }
        std::array<double, 3> grad{};
        for (int k = 0; k < 3; ++k) {
            const SymMatrix& qk = p.Q[static_cast<std::size_t>(k)];
            grad[static_cast<std::size_t>(k)] =
                qk.quadratic_form(v.data(), v.data()) - qk.quadratic_form(u.data(), u.data());
        }
        const double dot = grad[0] * x[0] + grad[1] * x[1] + grad[2] * x[2];
        for (int k = 0; k < 3; ++k) grad[static_cast<std::size_t>(k)] -= dot * x[static_cast<std::size_t>(k)];
        const double gnorm = std::sqrt(grad[0] * grad[0] + grad[1] * grad[1] + grad[2] * grad[2]);
        if (gnorm < 1e-13 * qnorm) {
            // Smooth stationary point of the gap above the Newton range:
            // a positive local minimum, not a coincidence.
            result.status = RefineStatus::Rejected;
            return result;
        }
        // Polyak step: displacement gap/|grad| reaches the tip of an exact
        // cone in one step; backtracking covers the general case.
        double step = std::min(gap / (gnorm * gnorm), 0.2 / gnorm);
        bool improved = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::array<double, 3> cand = x;
            for (int k = 0; k < 3; ++k) cand[static_cast<std::size_t>(k)] -= step * grad[static_cast<std::size_t>(k)];
            detail::normalize3(cand);
            const auto cvals = eigenvalues_sym(detail::q_at(p, cand));
            const double cgap = cvals[static_cast<std::size_t>(hi)] - cvals[static_cast<std::size_t>(lo)];
            if (cgap < gap) {
                x = cand;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            result.status = RefineStatus::Rejected;
            return result;
        }
    }
    if (!in_newton_range) {
        const auto vals = eigenvalues_sym(detail::q_at(p, x));
        const double gap = vals[static_cast<std::size_t>(hi)] - vals[static_cast<std::size_t>(lo)];
        const double qnorm = detail::q_at(p, x).frobenius_norm();
        if (gap >= cfg.newton_switch_rel * qnorm) {
            result.status = RefineStatus::NoConvergence;
            return result;
        }
    }

    // Stage 2: Newton. Eigenvectors are refrozen each step; the Jacobian
    // uses the linearity of Q in the chart coordinates.
    for (int it = 0; it < cfg.max_newton_iters; ++it) {
        const SymMatrix q = detail::q_at(p, x);
        const double qnorm = q.frobenius_norm();
        const EigenSystem sys = eigh_sym(q);
        const double gap = sys.values[static_cast<std::size_t>(hi)] - sys.values[static_cast<std::size_t>(lo)];
        result.gap_history.push_back(gap);
        if (gap <= cfg.target_gap_rel * qnorm) {
            SingularPointRecord rec;
            rec.direction = x;
            double min_gap_val = 0.0;
            rec.pair_index = detail::argmin_gap_pair(sys.values, &min_gap_val);
            rec.refined_gap = gap;
            std::vector<double> r_vals(sys.values);
            const double scale = p.scale();
            for (double& val : r_vals) val *= scale;
            const SpherePoint s3 = lift_to_sphere3(x, r_vals, rec.pair_index);
            rec.s3_point = {s3[0], s3[1], s3[2], s3[3]};
            rec.on_boundary = (rec.pair_index == 1);
            result.record = rec;
            result.status = RefineStatus::Converged;
            return result;
        }
        for (int i = 0; i < p.n; ++i) {
            u[static_cast<std::size_t>(i)] = sys.vector(i, lo);
            v[static_cast<std::size_t>(i)] = sys.vector(i, hi);
        }
        std::array<double, 3> e1{};
        std::array<double, 3> e2{};
        detail::tangent_basis(x, e1, e2);
        // F = (u^T Q u - v^T Q v, u^T Q v); at frozen exact eigenvectors
        // F = (-gap, 0). Jacobian columns come from Q(e1), Q(e2).
        double J[2][2];
        for (int a = 0; a < 2; ++a) {
            const std::array<double, 3>& e = (a == 0) ? e1 : e2;
            const SymMatrix qe = detail::q_at(p, e);
            J[0][a] = qe.quadratic_form(u.data(), u.data()) - qe.quadratic_form(v.data(), v.data());
            J[1][a] = qe.quadratic_form(u.data(), v.data());
        }
        const double f0 = -gap;
        const double f1 = 0.0;
        const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        const double jscale = std::abs(J[0][0]) + std::abs(J[0][1]) + std::abs(J[1][0]) + std::abs(J[1][1]);
        if (std::abs(det) < 1e-14 * jscale * jscale) {
            result.status = RefineStatus::NoConvergence;
            return result;
        }
        double s = (-f0 * J[1][1] + f1 * J[0][1]) / det;
        double t = (-J[0][0] * f1 + J[1][0] * f0) / det;
        const double step_norm = std::hypot(s, t);
        if (step_norm > 0.25) {
            s *= 0.25 / step_norm;
            t *= 0.25 / step_norm;
        }
        for (int k = 0; k < 3; ++k)
            x[static_cast<std::size_t>(k)] += s * e1[static_cast<std::size_t>(k)] + t * e2[static_cast<std::size_t>(k)];
        detail::normalize3(x);
    }
    result.status = RefineStatus::NoConvergence;
    return result;
}

/// Full counting pipeline for a three-matrix pencil: lattice scan of the
/// minimal gap, refinement of captured dips, clustering, antipodal
/// completion, and classification. rho counts all coincidence directions
/// (antipodes separately), sigma those whose lowest two eigenvalues
/// coincide.
inline CountReport count_singular_points(const Pencil& p, const NodeSearchConfig& cfg = {}) {
    if (p.ell != 3) throw std::invalid_argument("count_singular_points: pencil must have ell = 3");
    if (p.n < 2) throw std::invalid_argument("count_singular_points: need n >= 2");
    CountReport report;
    report.config = cfg;

    const detail::SphereLattice& lat = detail::fibonacci_lattice(cfg.lattice_points);
    const std::size_t npts = lat.points.size();
    std::vector<double> gap(npts, 0.0);
    std::vector<std::int32_t> pair(npts, 1);
    parallel_for(npts, resolve_workers(cfg.workers), [&](std::size_t i) {
        const auto vals = eigenvalues_sym(detail::q_at(p, lat.points[i]));
        double g = 0.0;
        pair[i] = detail::argmin_gap_pair(vals, &g);
        gap[i] = g;
    });

    // Capture threshold from the median gap variation between neighbors.
    std::vector<double> variation;
    variation.reserve(npts * 4);
    for (std::size_t i = 0; i < npts; ++i) {
        for (std::int32_t j : lat.neighbors[i]) {
            if (static_cast<std::size_t>(j) > i)
                variation.push_back(std::abs(gap[i] - gap[static_cast<std::size_t>(j)]));
        }
    }
    if (variation.empty())
        throw std::runtime_error("count_singular_points: lattice too small for neighbor statistics");
    const std::size_t mid = variation.size() / 2;
    std::nth_element(variation.begin(), variation.begin() + static_cast<std::ptrdiff_t>(mid), variation.end());
    const double threshold = cfg.capture_factor * variation[mid];

    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < npts; ++i) {
        if (gap[i] >= threshold) continue;
        bool is_min = true;
        for (std::int32_t j : lat.neighbors[i]) {
            if (gap[static_cast<std::size_t>(j)] < gap[i]) {
                is_min = false;
                break;
            }
        }
        if (is_min) candidates.push_back(i);
    }
    report.candidates = static_cast<int>(candidates.size());

    // Refine candidates and cluster the converged zeros (same coincident
    // pair within the cluster radius = same zero).
    std::vector<SingularPointRecord> zeros;
    auto add_zero = [&](const SingularPointRecord& rec) {
        for (auto& existing : zeros) {
            if (detail::chord_dist(existing.direction, rec.direction) <= cfg.cluster_radius) {
                if (existing.pair_index == rec.pair_index) {
                    if (rec.refined_gap < existing.refined_gap) existing = rec;
                    return;
                }
                report.flags.push_back("unresolved cluster");
                report.inconclusive = true;
            }
        }
        zeros.push_back(rec);
    };
    for (std::size_t ci : candidates) {
        const RefineResult r = refine_zero(p, lat.points[ci], pair[ci], cfg);
        if (r.status == RefineStatus::Converged) add_zero(r.record);
    }

    // Antipodal completion: the coincidence set is symmetric under
    // x -> -x with pair i -> n-i, so a zero without its partner marks a
    // capture miss; refining from the antipode recovers it.
    const std::size_t found = zeros.size();
    for (std::size_t i = 0; i < found; ++i) {
        const SingularPointRecord rec = zeros[i];
        const std::array<double, 3> anti = {-rec.direction[0], -rec.direction[1], -rec.direction[2]};
        const int anti_pair = p.n - rec.pair_index;
        bool has_partner = false;
        for (const auto& other : zeros) {
            if (other.pair_index == anti_pair &&
                detail::chord_dist(other.direction, anti) <= cfg.cluster_radius) {
                has_partner = true;
                break;
            }
        }
        if (has_partner) continue;
        const RefineResult r = refine_zero(p, anti, anti_pair, cfg);
        if (r.status == RefineStatus::Converged &&
            detail::chord_dist(r.record.direction, anti) <= 1e-2) {
            add_zero(r.record);
            report.flags.push_back("antipode_recovered");
        } else {
            report.flags.push_back("missing antipode");
            report.inconclusive = true;
        }
    }

    report.records = std::move(zeros);
    report.rho = static_cast<int>(report.records.size());
    report.sigma = 0;
    for (const auto& rec : report.records) {
        if (rec.on_boundary) ++report.sigma;
    }
    if (report.rho % 2 != 0) {
        report.flags.push_back("rho is odd");
        report.inconclusive = true;
    }
    return report;
}

/// Diagnostic flags from the known structural bounds on the counts. These
/// indicate numerical failures, not assertion errors.
inline std::vector<std::string> diagnostic_bounds(const CountReport& r, int n) {
    std::vector<std::string> flags;
    const int max_nodes = n * (n + 1) * (n - 1) / 3;
    if (r.rho % 2 != 0) flags.push_back("rho is odd");
    if (r.rho > max_nodes) flags.push_back("rho exceeds maximal node count");
    if (n % 4 == 2 && r.rho < 2) flags.push_back("violates Lax bound");
    if (n == 4) {
        if (r.rho % 4 != 0) {
            flags.push_back("rho not multiple of 4");
        } else if (r.rho < 4 || r.rho > 20) {
            flags.push_back("rho outside quartic range");
        }
        if (r.sigma > 10) flags.push_back("sigma exceeds quartic bound");
    }
    return flags;
}

} // namespace spectra
