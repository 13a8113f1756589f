#pragma once

// Choi correspondence for linear maps M_m -> M_n, channel classification
// (CP / TP / PPT / entanglement breaking), the normalization map N, and the
// normalized Choi-level mean of two full-rank channels.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conerig/bipartite.hpp"
#include "conerig/cones.hpp"
#include "conerig/hermitian.hpp"
#include "conerig/kubo_ando.hpp"
#include "conerig/matrix.hpp"
#include "conerig/rigidity.hpp"

namespace conerig {

// A linear map stored by its images of the matrix units E_ij. Only
// Hermiticity-preserving maps are representable: images[j][i] must equal
// images[i][j]* (that is what makes the Choi matrix Hermitian).
struct LinearMapOnMatrices {
    std::size_t m = 0, n = 0;    // domain M_m, codomain M_n
    std::vector<Matrix> images;  // row-major m*m list, images[i*m+j] = Phi(E_ij)

    LinearMapOnMatrices(std::size_t m_, std::size_t n_, std::vector<Matrix> imgs,
                        double tol = 1e-12)
        : m(m_), n(n_), images(std::move(imgs)) {
        if (m == 0 || n == 0)
            throw std::invalid_argument("LinearMapOnMatrices: dimensions must be positive");
        if (images.size() != m * m)
            throw std::invalid_argument("LinearMapOnMatrices: expected " + std::to_string(m * m) +
                                        " matrix-unit images, got " +
                                        std::to_string(images.size()));
        for (const auto& img : images)
            if (img.rows() != n || img.cols() != n)
                throw std::invalid_argument("LinearMapOnMatrices: every image must be " +
                                            std::to_string(n) + "x" + std::to_string(n));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                const double dev = images[i * m + j].max_abs_diff(images[j * m + i].adjoint());
                if (dev > tol)
                    throw std::invalid_argument(
                        "LinearMapOnMatrices: map is not Hermiticity-preserving, "
                        "|Phi(E_" + std::to_string(i) + std::to_string(j) + ") - Phi(E_" +
                        std::to_string(j) + std::to_string(i) + ")*| = " + std::to_string(dev));
            }
    }

    Matrix apply(const Matrix& x) const {
        if (x.rows() != m || x.cols() != m)
            throw std::invalid_argument("LinearMapOnMatrices::apply: input must be " +
                                        std::to_string(m) + "x" + std::to_string(m));
        Matrix out(n, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const Complex w = x(i, j);
                if (w == Complex{}) continue;
                out += images[i * m + j] * w;
            }
        return out;
    }
};

struct ChoiMatrix {
    BipartiteOperator bip;
    bool trace_preserving = false;

    explicit ChoiMatrix(BipartiteOperator b) : bip(std::move(b)) {
        const Matrix red = partial_trace_second(bip);
        trace_preserving =
            (red - Matrix::identity(bip.m)).frobenius_norm() <= 1e-10;
    }
};

// C_Phi = sum_ij E_ij (x) Phi(E_ij): block (i,j) is the image of E_ij
inline ChoiMatrix choi_of_map(const LinearMapOnMatrices& phi) {
    const std::size_t m = phi.m, n = phi.n;
    Matrix c(m * n, m * n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const Matrix& img = phi.images[i * m + j];
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) c(n * i + k, n * j + l) = img(k, l);
        }
    return ChoiMatrix(BipartiteOperator(m, n, c, 1e-11));
}

inline LinearMapOnMatrices map_of_choi(const ChoiMatrix& c) {
    const std::size_t m = c.bip.m, n = c.bip.n;
    std::vector<Matrix> images(m * m, Matrix(n, n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    images[i * m + j](k, l) = c.bip.mat(n * i + k, n * j + l);
    return LinearMapOnMatrices(m, n, std::move(images));
}

// Phi(X) = sum_k K_k X K_k^*; every Kraus operator must be n x m
inline LinearMapOnMatrices kraus_to_map(const std::vector<Matrix>& kraus) {
    if (kraus.empty()) throw std::invalid_argument("kraus_to_map: empty Kraus list");
    const std::size_t n = kraus.front().rows(), m = kraus.front().cols();
    for (const auto& k : kraus)
        if (k.rows() != n || k.cols() != m)
            throw std::invalid_argument("kraus_to_map: Kraus operators must share one shape");
    std::vector<Matrix> images(m * m, Matrix(n, n));
    for (const auto& k : kraus)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                // K E_ij K^* = (i-th column of K) (j-th column of K)^*
                for (std::size_t p = 0; p < n; ++p)
                    for (std::size_t q = 0; q < n; ++q)
                        images[i * m + j](p, q) += k(p, i) * std::conj(k(q, j));
    return LinearMapOnMatrices(m, n, std::move(images));
}

struct MapClass {
    bool completely_positive = false;
    bool trace_preserving = false;
    bool ppt_map = false;
    ConeVerdict entanglement_breaking;  // decidable only in small dimensions
    SchmidtNumberBound k_superpositive;
};

inline MapClass classify(const ChoiMatrix& c, double tol = -1.0) {
    MapClass out;
    out.trace_preserving = c.trace_preserving;
    const ConeVerdict ppt = is_ppt(c.bip, tol);
    const double use_tol = (tol >= 0.0) ? tol : cone_tolerance(c.bip.mat);
    out.completely_positive = ppt.min_eigenvalue >= -use_tol;
    out.ppt_map = out.completely_positive && ppt.member;

    const bool small = (c.bip.m == 2 && c.bip.n == 2) || (c.bip.m == 2 && c.bip.n == 3) ||
                       (c.bip.m == 3 && c.bip.n == 2);
    if (!out.completely_positive) {
        // the witness is the Choi matrix's own negative eigenvalue
        out.entanglement_breaking = ppt;
        out.entanglement_breaking.member = false;
        out.entanglement_breaking.detail =
            "not completely positive (Choi min eigenvalue " +
            std::to_string(ppt.min_eigenvalue) + "), hence not entanglement breaking";
        out.k_superpositive = {0, 0, "undefined: map is not completely positive"};
    } else if (small) {
        out.entanglement_breaking = is_separable_small(c.bip, tol);
        out.k_superpositive = (c.bip.m == 2 && c.bip.n == 2)
                                  ? schmidt_number_2x2(c.bip, tol)
                                  : schmidt_number_generic(c.bip);
    } else if (!ppt.member) {
        out.entanglement_breaking = ppt;  // NPT decides one direction in any dimension
        out.entanglement_breaking.detail = "Choi matrix is not PPT, hence not separable";
        out.k_superpositive = schmidt_number_generic(c.bip);
        out.k_superpositive.lower = 2;
        out.k_superpositive.method = "PTSpectrum";
    } else {
        out.entanglement_breaking = ppt;
        out.entanglement_breaking.member = false;
        out.entanglement_breaking.certificate = Certificate::Unknown;
        out.entanglement_breaking.detail =
            "entanglement breaking is undecidable here for " + std::to_string(c.bip.m) + "x" +
            std::to_string(c.bip.n) + "; no verdict";
        out.k_superpositive = schmidt_number_generic(c.bip);
    }
    return out;
}

namespace detail {

inline bool scalar_diagonal(const Matrix& r, double& c) {
    c = r(0, 0).real();
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j) {
            const Complex want = (i == j) ? Complex{c} : Complex{};
            if (r(i, j) != want) return false;
        }
    return true;
}

}  // namespace detail

// N(C) = ((Tr_2 C)^{-1/2} (x) I) C ((Tr_2 C)^{-1/2} (x) I); the result has
// Tr_2 = I. A scalar partial trace cI is divided out exactly.
inline ChoiMatrix normalize(const ChoiMatrix& c) {
    const Matrix red = partial_trace_second(c.bip);
    double scalar = 0.0;
    if (detail::scalar_diagonal(red, scalar)) {
        if (!(scalar > 0.0))
            throw std::domain_error("normalize: partial trace is not positive definite");
        Matrix scaled = c.bip.mat;
        for (std::size_t i = 0; i < scaled.rows(); ++i)
            for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) /= scalar;
        return ChoiMatrix(BipartiteOperator(c.bip.m, c.bip.n, scaled));
    }
    const auto es = eigh(red, 1e-10);
    const double lmax = std::abs(es.eigenvalues.back());
    if (es.eigenvalues.front() <= 1e-12 * std::max(1.0, lmax))
        throw std::domain_error(
            "normalize: partial trace of the Choi matrix is singular (min eigenvalue " +
            std::to_string(es.eigenvalues.front()) + ")");
    const Matrix rinv_sqrt = apply_spectral_function(
        HermitianMatrix(red, 1e-10), [](double x) { return 1.0 / std::sqrt(x); });
    const Matrix congr = kron(rinv_sqrt, Matrix::identity(c.bip.n));
    return ChoiMatrix(BipartiteOperator(c.bip.m, c.bip.n, congr * c.bip.mat * congr, 1e-10));
}

namespace detail {

inline void require_pd_choi(const ChoiMatrix& c, const char* who, const char* which) {
    const auto es = eigh(c.bip.mat);
    const double lmax = std::max({std::abs(es.eigenvalues.front()),
                                  std::abs(es.eigenvalues.back()), 1.0});
    if (es.eigenvalues.front() <= 1e-12 * lmax) {
        const double delta = 1e-8 * c.bip.mat.trace().real();
        throw std::domain_error(std::string(who) + ": Choi matrix of " + which +
                                " is singular (min eigenvalue " +
                                std::to_string(es.eigenvalues.front()) +
                                "); if an interior approximation is acceptable, shift it by "
                                "delta*I with delta = 1e-8 * trace = " +
                                std::to_string(delta) + " and retry");
    }
}

}  // namespace detail

// the unique map whose Choi matrix is mean(f, C_Phi, C_Psi)
inline LinearMapOnMatrices choi_level_mean(const RepresentingFunction& f,
                                           const LinearMapOnMatrices& phi,
                                           const LinearMapOnMatrices& psi) {
    const ChoiMatrix ca = choi_of_map(phi), cb = choi_of_map(psi);
    if (ca.bip.m != cb.bip.m || ca.bip.n != cb.bip.n)
        throw std::invalid_argument("choi_level_mean: maps have different dimensions");
    detail::require_pd_choi(ca, "choi_level_mean", "the first map");
    detail::require_pd_choi(cb, "choi_level_mean", "the second map");
    const Matrix mixed = mean(f, ca.bip.mat, cb.bip.mat);
    return map_of_choi(ChoiMatrix(BipartiteOperator(ca.bip.m, ca.bip.n, mixed, 1e-8)));
}

// sigma-hat: J(Phi sigma-hat Psi) = N(J(Phi) sigma J(Psi)), defined for
// trace-preserving maps with positive definite Choi matrices
inline LinearMapOnMatrices normalized_channel_mean(const RepresentingFunction& f,
                                                   const LinearMapOnMatrices& phi,
                                                   const LinearMapOnMatrices& psi) {
    const ChoiMatrix ca = choi_of_map(phi), cb = choi_of_map(psi);
    if (ca.bip.m != cb.bip.m || ca.bip.n != cb.bip.n)
        throw std::invalid_argument("normalized_channel_mean: maps have different dimensions");
    if (!ca.trace_preserving || !cb.trace_preserving)
        throw std::invalid_argument(
            "normalized_channel_mean: both maps must be trace preserving");
    detail::require_pd_choi(ca, "normalized_channel_mean", "the first channel");
    detail::require_pd_choi(cb, "normalized_channel_mean", "the second channel");
    const Matrix mixed = mean(f, ca.bip.mat, cb.bip.mat);
    const ChoiMatrix normalized =
        normalize(ChoiMatrix(BipartiteOperator(ca.bip.m, ca.bip.n, mixed, 1e-8)));
    return map_of_choi(normalized);
}

// Channel-rigidity statement: the scalar-normalized channels built from the
// rigidity pair are full-rank entanglement-breaking qubit channels, yet any
// non-arithmetic sigma-hat mean of them fails to be PPT.
inline TheoremReport verify_thm_ent_rig(const RepresentingFunction& f, double epsilon,
                                        double tol = -1.0) {
    const RigidityPair p = build_pair(epsilon);
    TheoremReport rep;
    rep.theorem = "ent-rig";
    rep.mean_spec = mean_spec_string(f);
    rep.epsilon = epsilon;
    rep.m = rep.n = 2;
    rep.kappa = -f.d2;

    // Tr_2 A_eps = ((3+eps)/2) I, so N divides by that scalar
    const double sa = (3.0 + epsilon) / 2.0, sb = (3.0 - epsilon) / 2.0;
    const XFormOperator atil{p.A.alpha / sa, p.A.beta / sa, p.A.gamma / sa};
    const XFormOperator btil{p.B.alpha / sb, p.B.beta / sb, p.B.gamma / sb};
    const ChoiMatrix ca(atil.to_bipartite()), cb(btil.to_bipartite());

    for (const ChoiMatrix* c : {&ca, &cb}) {
        const MapClass cls = classify(*c, tol);
        ConeVerdict v = cls.entanglement_breaking;
        if (!cls.trace_preserving || !cls.completely_positive) v.member = false;
        rep.input_verdicts.push_back(v);
        const char* tag = (c == &ca) ? "a" : "b";
        rep.metrics.emplace_back(std::string("input_") + tag + "_tp",
                                 cls.trace_preserving ? 1.0 : 0.0);
        rep.metrics.emplace_back(std::string("input_") + tag + "_min_eig", v.min_eigenvalue);
        rep.metrics.emplace_back(
            std::string("input_") + tag + "_tp_residual",
            (partial_trace_second(c->bip) - Matrix::identity(2)).frobenius_norm());
    }

    const LinearMapOnMatrices mixed =
        normalized_channel_mean(f, map_of_choi(ca), map_of_choi(cb));
    const ChoiMatrix cm = choi_of_map(mixed);
    rep.mean_verdict = is_separable_small(cm.bip, tol);
    rep.metrics.emplace_back("mean_tp", cm.trace_preserving ? 1.0 : 0.0);
    rep.metrics.emplace_back(
        "mean_tp_residual",
        (partial_trace_second(cm.bip) - Matrix::identity(2)).frobenius_norm());

    // exact coefficient route: everything stays in the xform family
    const XFormOperator mtil = xform_mean(f, atil, btil);
    const double norm_scalar = mtil.alpha + mtil.beta / 2.0 + mtil.gamma / 2.0;
    rep.lambda3_exact = (mtil.alpha + mtil.beta / 2.0 - mtil.gamma / 2.0) / norm_scalar;
    rep.lambda3_numeric = rep.mean_verdict.min_pt_eigenvalue;
    rep.metrics.emplace_back("exact_numeric_gap",
                             std::abs(rep.lambda3_exact - rep.lambda3_numeric));

    const double use_tol = (tol >= 0.0) ? tol : cone_tolerance(cm.bip.mat);
    rep.conclusion = detail::conclude(rep.lambda3_numeric, use_tol, rep.kappa);
    if (rep.conclusion == "preserved")
        rep.notes = "arithmetic sigma-hat of entanglement-breaking channels is a convex "
                    "combination of their Choi matrices; no normalization is needed";
    else if (rep.conclusion == "inconclusive")
        rep.notes = "normalized mean stayed PPT at this epsilon; no conclusion";
    return rep;
}

}  // namespace conerig
