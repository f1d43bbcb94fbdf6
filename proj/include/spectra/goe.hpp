// Sampling from the Gaussian Orthogonal Ensemble: diagonal entries N(0,1),
// off-diagonal entries N(0,1/2), all independent up to symmetry.

#pragma once

#include <cmath>
#include <stdexcept>

#include "spectra/rng.hpp"
#include "spectra/sym_matrix.hpp"

namespace spectra {

inline SymMatrix goe_sample(int n, RngEngine& rng) {
    if (n < 1) throw std::invalid_argument("goe_sample: dimension must be >= 1");
    SymMatrix q(n);
    const double off_scale = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        q.set(i, i, rng.normal());
        for (int j = i + 1; j < n; ++j) q.set(i, j, off_scale * rng.normal());
    }
    return q;
}

inline SymMatrix goe_sample(int n, const RngStream& stream) {
    RngEngine rng(stream);
    return goe_sample(n, rng);
}

} // namespace spectra
