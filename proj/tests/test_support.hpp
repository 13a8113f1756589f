#pragma once

// Shared generators for the property tests. Everything is seeded explicitly
// so failures replay bit-identically.

#include <cstdint>
#include <random>

#include "conerig/matrix.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline conerig::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                     double scale = 1.0) {
    conerig::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = conerig::Complex(uniform(rng, -scale, scale), uniform(rng, -scale, scale));
    return m;
}

inline conerig::Matrix random_hermitian(Rng& rng, std::size_t n, double scale = 1.0) {
    conerig::Matrix m = random_matrix(rng, n, n, scale);
    conerig::Matrix h = m + m.adjoint();
    return h * 0.5;
}

// G*G + eps I, strictly positive definite
inline conerig::Matrix random_pd(Rng& rng, std::size_t n, double eps = 1e-3) {
    conerig::Matrix g = random_matrix(rng, n, n);
    conerig::Matrix p = g.adjoint() * g;
    conerig::Matrix shift = conerig::Matrix::identity(n);
    return p + shift * eps;
}

inline conerig::Matrix random_unit_vector(Rng& rng, std::size_t n) {
    conerig::Matrix v = random_matrix(rng, n, 1);
    double norm = v.frobenius_norm();
    while (norm < 1e-6) {
        v = random_matrix(rng, n, 1);
        norm = v.frobenius_norm();
    }
    return v * (1.0 / norm);
}

}  // namespace testsupport
