#pragma once

// Membership tests for the PPT cone, the separable cone where the
// Peres-Horodecki criterion is decisive (2x2 and 2x3), Schmidt rank of
// vectors, and Schmidt number bounds for the structured tensor constructions.
// Verdicts always carry raw minimum eigenvalues so callers can re-threshold:
// the interesting operators here sit deliberately close to cone boundaries.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "conerig/bipartite.hpp"
#include "conerig/hermitian.hpp"
#include "conerig/matrix.hpp"

namespace conerig {

// Base cone tolerance, overridable at process level (the CLI maps the
// CONE_TOL environment variable here). Default 1e-9.
inline double& cone_tolerance_base() {
    static double base = 1e-9;
    return base;
}

// per-operator tolerance: the base scaled by the trace
inline double cone_tolerance(const Matrix& x) {
    return cone_tolerance_base() * std::max(1.0, std::abs(x.trace().real()));
}

struct PsdCheck {
    bool psd;
    double min_eigenvalue;
};

inline PsdCheck is_psd(const BipartiteOperator& x, double tol = -1.0) {
    if (tol < 0.0) tol = cone_tolerance(x.mat);
    const double lmin = eigh(x.mat).eigenvalues.front();
    return {lmin >= -tol, lmin};
}

enum class Certificate { PTSpectrum, PeresHorodecki, StructuralLemma, Unknown };

inline const char* certificate_name(Certificate c) {
    switch (c) {
        case Certificate::PTSpectrum: return "PTSpectrum";
        case Certificate::PeresHorodecki: return "PeresHorodecki";
        case Certificate::StructuralLemma: return "StructuralLemma";
        case Certificate::Unknown: return "Unknown";
    }
    return "?";
}

struct ConeVerdict {
    bool member = false;
    Certificate certificate = Certificate::Unknown;
    double min_eigenvalue = 0.0;     // of X
    double min_pt_eigenvalue = 0.0;  // of X^Gamma
    std::vector<double> pt_spectrum; // ascending
    std::string detail;
};

inline ConeVerdict is_ppt(const BipartiteOperator& x, double tol = -1.0) {
    if (tol < 0.0) tol = cone_tolerance(x.mat);
    ConeVerdict v;
    v.min_eigenvalue = eigh(x.mat).eigenvalues.front();
    v.pt_spectrum = eigh(partial_transpose(x).mat).eigenvalues;
    v.min_pt_eigenvalue = v.pt_spectrum.front();
    v.member = v.min_eigenvalue >= -tol && v.min_pt_eigenvalue >= -tol;
    if (v.member || v.min_pt_eigenvalue < -tol) {
        v.certificate = Certificate::PTSpectrum;
    } else {
        // the operator itself fails positivity while its partial transpose
        // passes; the PT spectrum is then not the witness
        v.certificate = Certificate::Unknown;
        v.detail = "operator is not positive semidefinite (min eigenvalue " +
                   std::to_string(v.min_eigenvalue) + ")";
    }
    return v;
}

// interior of the PPT cone: strict positivity of both X and X^Gamma
inline bool is_ppt_interior(const BipartiteOperator& x, double tol = -1.0) {
    if (tol < 0.0) tol = cone_tolerance(x.mat);
    ConeVerdict v = is_ppt(x, tol);
    return v.min_eigenvalue > tol && v.min_pt_eigenvalue > tol;
}

// Peres-Horodecki is decisive exactly in 2x2 and 2x3; anything else is
// refused rather than guessed.
inline ConeVerdict is_separable_small(const BipartiteOperator& x, double tol = -1.0) {
    const bool decidable = (x.m == 2 && x.n == 2) || (x.m == 2 && x.n == 3) ||
                           (x.m == 3 && x.n == 2);
    if (!decidable)
        throw std::invalid_argument("is_separable_small: separability is undecidable here for " +
                                    std::to_string(x.m) + "x" + std::to_string(x.n) +
                                    "; only 2x2 and 2x3 are supported");
    ConeVerdict v = is_ppt(x, tol);
    v.certificate = Certificate::PeresHorodecki;
    return v;
}

struct SchmidtInfo {
    std::size_t m = 0, n = 0;
    std::size_t schmidt_rank = 0;
    std::vector<double> singular_values;  // nonincreasing, length min(m,n)
};

// Schmidt rank of a vector z in C^m (x) C^n: reshape to an m x n matrix and
// count singular values above 1e-10 * sigma_max (via the n x n Gram matrix).
inline SchmidtInfo schmidt_rank(const Matrix& z, std::size_t m, std::size_t n) {
    if (z.cols() != 1 || z.rows() != m * n)
        throw std::invalid_argument("schmidt_rank: expected a column vector of length " +
                                    std::to_string(m * n));
    SchmidtInfo info;
    info.m = m;
    info.n = n;
    if (z.frobenius_norm() == 0.0) return info;  // rank 0, no singular values

    Matrix zmat(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) zmat(i, j) = z(n * i + j, 0);
    EigenSystem es = eigh(zmat.adjoint() * zmat);  // Gram, eigenvalues ascending

    // Gram eigenvalues that should be exactly zero surface as eigensolver
    // noise ~1e-15 * lambda_max, which the square root would inflate past the
    // rank threshold; floor them before converting to singular values.
    const double lmax = std::max(es.eigenvalues.back(), 0.0);
    const std::size_t k = std::min(m, n);
    info.singular_values.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double lam = es.eigenvalues[n - 1 - i];
        info.singular_values[i] = (lam > 1e-12 * lmax) ? std::sqrt(lam) : 0.0;
    }
    const double smax = info.singular_values.front();
    for (double s : info.singular_values)
        if (s > 1e-10 * smax) ++info.schmidt_rank;
    return info;
}

struct SchmidtNumberBound {
    std::size_t lower = 1, upper = 1;
    std::string method;
};

// SN in 2x2 is decidable: 1 if PPT (= separable), 2 otherwise
inline SchmidtNumberBound schmidt_number_2x2(const BipartiteOperator& x, double tol = -1.0) {
    if (x.m != 2 || x.n != 2)
        throw std::invalid_argument("schmidt_number_2x2: operator is " + std::to_string(x.m) +
                                    "x" + std::to_string(x.n) + ", expected 2x2");
    PsdCheck p = is_psd(x, tol);
    if (!p.psd)
        throw std::domain_error("schmidt_number_2x2: operator is not positive semidefinite, "
                                "min eigenvalue " + std::to_string(p.min_eigenvalue));
    ConeVerdict v = is_ppt(x, tol);
    if (v.member) return {1, 1, "PeresHorodecki"};
    return {2, 2, "PeresHorodecki"};
}

// SN(psi psi* (x) Y) = SR(psi) * SN(Y) after the middle-factor regrouping
inline SchmidtNumberBound schmidt_number_pure_tensor(const SchmidtInfo& psi,
                                                     const SchmidtNumberBound& y) {
    const std::size_t r = psi.schmidt_rank;
    if (r == 0)
        throw std::invalid_argument("schmidt_number_pure_tensor: zero vector has no Schmidt "
                                    "decomposition");
    SchmidtNumberBound out;
    out.lower = r * std::max<std::size_t>(1, y.lower);
    out.upper = r * y.upper;
    out.method = (y.lower == y.upper) ? "StructuralLemma"
                                      : "StructuralLemma(inexact inner bound)";
    return out;
}

// honest fallback when no structure is available
inline SchmidtNumberBound schmidt_number_generic(const BipartiteOperator& x) {
    return {1, std::min(x.m, x.n), "generic"};
}

}  // namespace conerig
