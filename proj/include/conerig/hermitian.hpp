#pragma once

// Hermitian eigendecomposition via cyclic complex Jacobi rotations, plus the
// spectral functional calculus g(H) = V diag(g(lambda)) V*. Self-contained on
// purpose: the rigidity experiments need eigenvalues trustworthy to ~1e-13,
// and at dimensions <= 25 Jacobi is simple, backward stable, and easy to audit.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "conerig/matrix.hpp"

namespace conerig {

// Checked wrapper: accepts a matrix that is Hermitian up to `tol` (relative to
// max(1, max entry)), stores the exact Hermitian part (M + M*)/2.
class HermitianMatrix {
public:
    explicit HermitianMatrix(const Matrix& m, double tol = 1e-12) {
        m.require_square("HermitianMatrix");
        if (!m.all_finite())
            throw std::invalid_argument("HermitianMatrix: non-finite entry");
        const double scale = std::max(1.0, m.max_abs());
        const double asym = m.max_abs_diff(m.adjoint());
        if (asym > tol * scale)
            throw std::invalid_argument("HermitianMatrix: asymmetry " + std::to_string(asym) +
                                        " exceeds tolerance " + std::to_string(tol * scale));
        mat_ = m;
        const Matrix adj = m.adjoint();
        mat_ += adj;
        mat_ *= Complex(0.5, 0.0);
    }

    const Matrix& mat() const { return mat_; }
    std::size_t dim() const { return mat_.rows(); }

private:
    Matrix mat_;
};

struct EigenSystem {
    std::vector<double> eigenvalues;  // ascending
    Matrix eigenvectors;              // unitary, column k pairs with eigenvalues[k]

    Matrix reconstruct() const {
        const std::size_t n = eigenvalues.size();
        Matrix d(n, n);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = eigenvalues[i];
        return eigenvectors * d * eigenvectors.adjoint();
    }
};

namespace detail {

inline double offdiag_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi for Hermitian matrices. Each rotation annihilates pivot
// M(p,q) = |b| e^{i phi} with the unitary
//   U = [[c, -s e^{i phi}], [s e^{-i phi}, c]],  t = sign(z)/(|z| + sqrt(z^2+1)),
// where z = (M(p,p) - M(q,q)) / (2|b|), c = 1/sqrt(1+t^2), s = t c.
// Converges when the off-diagonal Frobenius norm drops below
// 1e-13 * max(1, ||M||_F); throws after 100 sweeps otherwise.
inline EigenSystem eigh(const HermitianMatrix& h) {
    Matrix m = h.mat();
    const std::size_t n = m.rows();
    Matrix v = Matrix::identity(n);

    const double threshold = 1e-13 * std::max(1.0, m.frobenius_norm());
    const double skip = threshold / std::max<double>(1.0, static_cast<double>(n * n));

    double off = detail::offdiag_norm(m);
    int sweep = 0;
    for (; sweep < 100 && off > threshold; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = m(p, q);
                const double ab = std::abs(b);
                if (ab <= skip) continue;
                const Complex phase = b / ab;  // e^{i phi}
                const double z = (m(p, p).real() - m(q, q).real()) / (2.0 * ab);
                const double t = (z >= 0.0 ? 1.0 : -1.0) / (std::abs(z) + std::sqrt(z * z + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex sp = s * phase;             // s e^{i phi}
                const Complex sm = s * std::conj(phase);  // s e^{-i phi}

                // M <- U* M (rows p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex mp = m(p, k), mq = m(q, k);
                    m(p, k) = c * mp + sp * mq;
                    m(q, k) = -sm * mp + c * mq;
                }
                // M <- M U (columns p, q)
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex mp = m(k, p), mq = m(k, q);
                    m(k, p) = c * mp + sm * mq;
                    m(k, q) = -sp * mp + c * mq;
                }
                m(p, q) = 0.0;
                m(q, p) = 0.0;
                m(p, p) = Complex(m(p, p).real(), 0.0);
                m(q, q) = Complex(m(q, q).real(), 0.0);

                // V <- V U
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vp = v(k, p), vq = v(k, q);
                    v(k, p) = c * vp + sm * vq;
                    v(k, q) = -sp * vp + c * vq;
                }
            }
        }
        off = detail::offdiag_norm(m);
    }
    if (off > threshold)
        throw std::runtime_error("eigh: Jacobi failed to converge in 100 sweeps, off-diagonal "
                                 "residual " + std::to_string(off));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return m(a, a).real() < m(b, b).real(); });

    EigenSystem es;
    es.eigenvalues.resize(n);
    es.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        es.eigenvalues[k] = m(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) es.eigenvectors(i, k) = v(i, order[k]);
    }
    return es;
}

inline EigenSystem eigh(const Matrix& m, double tol = 1e-12) {
    return eigh(HermitianMatrix(m, tol));
}

// g(H) by the spectral theorem. g must be real-valued and finite on the
// spectrum; a non-finite g(lambda) names the offending eigenvalue.
template <typename F>
Matrix apply_spectral_function(const HermitianMatrix& h, F&& g) {
    EigenSystem es = eigh(h);
    const std::size_t n = es.eigenvalues.size();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = g(es.eigenvalues[i]);
        if (!std::isfinite(gi))
            throw std::domain_error("apply_spectral_function: g(" +
                                    std::to_string(es.eigenvalues[i]) + ") is not finite");
        d(i, i) = gi;
    }
    return es.eigenvectors * d * es.eigenvectors.adjoint();
}

template <typename F>
Matrix apply_spectral_function(const Matrix& m, F&& g, double tol = 1e-12) {
    return apply_spectral_function(HermitianMatrix(m, tol), std::forward<F>(g));
}

inline double min_eigenvalue(const Matrix& m, double tol = 1e-12) {
    return eigh(m, tol).eigenvalues.front();
}

}  // namespace conerig
