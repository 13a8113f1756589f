#pragma once

// Bipartite structure on C^m (x) C^n with the fixed index convention
// e_i (x) e_j  ->  n*i + j   (zero-based, row-major).
// Partial transpose and partial trace are pure index manipulations under this
// convention, so they are exact; no tolerance enters until eigenvalues do.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "conerig/hermitian.hpp"
#include "conerig/matrix.hpp"

namespace conerig {

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

// Hermitian operator on C^m (x) C^n. The matrix is validated and stored in
// exactly Hermitian form, so index-permutation ops below stay bit-exact.
struct BipartiteOperator {
    std::size_t m, n;
    Matrix mat;

    BipartiteOperator(std::size_t m_, std::size_t n_, const Matrix& mat_, double tol = 1e-12)
        : m(m_), n(n_), mat(HermitianMatrix(mat_, tol).mat()) {
        if (m == 0 || n == 0)
            throw std::invalid_argument("BipartiteOperator: factor dimensions must be positive");
        if (mat.rows() != m * n)
            throw std::invalid_argument("BipartiteOperator: matrix is " +
                                        std::to_string(mat.rows()) + "x" +
                                        std::to_string(mat.cols()) + ", expected " +
                                        std::to_string(m * n) + " = " + std::to_string(m) + "*" +
                                        std::to_string(n));
    }
};

inline BipartiteOperator kron_op(const Matrix& a, const Matrix& b, double tol = 1e-12) {
    a.require_square("kron_op");
    b.require_square("kron_op");
    return BipartiteOperator(a.rows(), b.rows(), kron(a, b), tol);
}

// (id (x) T): transpose of each n x n block. Involutive and bit-exact.
inline BipartiteOperator partial_transpose(const BipartiteOperator& x) {
    const std::size_t m = x.m, n = x.n;
    Matrix y(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t l = 0; l < n; ++l)
                    y(n * i + j, n * k + l) = x.mat(n * i + l, n * k + j);
    return BipartiteOperator(m, n, y);
}

inline Matrix partial_trace_second(const BipartiteOperator& x) {
    Matrix t(x.m, x.m);
    for (std::size_t i = 0; i < x.m; ++i)
        for (std::size_t k = 0; k < x.m; ++k)
            for (std::size_t j = 0; j < x.n; ++j) t(i, k) += x.mat(x.n * i + j, x.n * k + j);
    return t;
}

struct LocalIsometryPair {
    Matrix V, W;  // V: m x m0, W: n x n0, both with X*X = I

    LocalIsometryPair(const Matrix& v, const Matrix& w, double tol = 1e-12) : V(v), W(w) {
        check_isometry(V, "V", tol);
        check_isometry(W, "W", tol);
    }

private:
    static void check_isometry(const Matrix& x, const char* name, double tol) {
        if (x.cols() > x.rows())
            throw std::invalid_argument(std::string("LocalIsometryPair: ") + name +
                                        " has more columns than rows");
        Matrix gram = x.adjoint() * x;
        const double dev = gram.max_abs_diff(Matrix::identity(x.cols()));
        if (dev > tol)
            throw std::invalid_argument(std::string("LocalIsometryPair: ") + name +
                                        "*" + name + " deviates from identity by " +
                                        std::to_string(dev));
    }
};

// to x from matrix with ones on the diagonal: inclusion of C^from into C^to
inline Matrix canonical_isometry(std::size_t from, std::size_t to) {
    if (to < from)
        throw std::invalid_argument("canonical_isometry: target dimension " + std::to_string(to) +
                                    " smaller than source " + std::to_string(from));
    Matrix v(to, from);
    for (std::size_t i = 0; i < from; ++i) v(i, i) = 1.0;
    return v;
}

// (V (x) W) X (V (x) W)*
inline BipartiteOperator embed(const BipartiteOperator& x, const LocalIsometryPair& iso) {
    if (iso.V.cols() != x.m || iso.W.cols() != x.n)
        throw std::invalid_argument("embed: isometry domains " + std::to_string(iso.V.cols()) +
                                    "x" + std::to_string(iso.W.cols()) + " do not match operator " +
                                    std::to_string(x.m) + "x" + std::to_string(x.n));
    const Matrix vw = kron(iso.V, iso.W);
    return BipartiteOperator(iso.V.rows(), iso.W.rows(), vw * x.mat * vw.adjoint());
}

// Conjugation by the permutation that reorders tensor factors. dims are the
// factor dimensions of the input (most significant first); output factor k is
// input factor perm[k].
inline Matrix permute_tensor_factors(const Matrix& x, const std::vector<std::size_t>& dims,
                                     const std::vector<std::size_t>& perm) {
    const std::size_t nf = dims.size();
    if (perm.size() != nf)
        throw std::invalid_argument("permute_tensor_factors: dims/perm size mismatch");
    std::size_t total = 1;
    for (std::size_t d : dims) total *= d;
    x.require_square("permute_tensor_factors");
    if (x.rows() != total)
        throw std::invalid_argument("permute_tensor_factors: matrix dimension " +
                                    std::to_string(x.rows()) + " does not equal product " +
                                    std::to_string(total));
    std::vector<bool> seen(nf, false);
    for (std::size_t p : perm) {
        if (p >= nf || seen[p])
            throw std::invalid_argument("permute_tensor_factors: invalid permutation");
        seen[p] = true;
    }

    // map[g] = index of the digit string of g read in permuted order
    std::vector<std::size_t> map(total);
    std::vector<std::size_t> digits(nf);
    for (std::size_t g = 0; g < total; ++g) {
        std::size_t rem = g;
        for (std::size_t k = nf; k-- > 0;) {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        std::size_t out = 0;
        for (std::size_t k = 0; k < nf; ++k) out = out * dims[perm[k]] + digits[perm[k]];
        map[g] = out;
    }

    Matrix y(total, total);
    for (std::size_t g = 0; g < total; ++g)
        for (std::size_t h = 0; h < total; ++h) y(map[g], map[h]) = x(g, h);
    return y;
}

// Regroup an operator on (C^r (x) C^r) (x) (C^2 (x) C^2), bipartite as r^2 | 4,
// into one on (C^r (x) C^2) (x) (C^r (x) C^2) by exchanging the middle factors.
inline BipartiteOperator swap_middle_factors(const BipartiteOperator& x, std::size_t r) {
    if (x.m != r * r || x.n != 4)
        throw std::invalid_argument("swap_middle_factors: expected bipartition " +
                                    std::to_string(r * r) + "|4, got " + std::to_string(x.m) +
                                    "|" + std::to_string(x.n));
    const Matrix y = permute_tensor_factors(x.mat, {r, r, 2, 2}, {0, 2, 1, 3});
    return BipartiteOperator(2 * r, 2 * r, y);
}

}  // namespace conerig
