#pragma once

// Two-variable operator means in the Kubo-Ando sense. Each mean is carried by
// its representing function f on (0,inf), normalized to f(1) = 1, through
//   A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2}.
// The quantity kappa = -f''(1) drives everything downstream: it is the sole
// coefficient in the cone-violation asymptotics, so f must be accurate to
// ~1e-12 in a neighborhood of 1. The logarithmic families have removable
// singularities at x = 1 and at the weight endpoints; they are evaluated via
// expm1/log1p with a quadratic series fallback near 1.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "conerig/hermitian.hpp"
#include "conerig/matrix.hpp"

namespace conerig {

enum class MeanFamily {
    WeightedArithmetic,
    WeightedGeometric,
    WeightedHarmonic,
    WeightedLogarithmic,
    DualWeightedLogarithmic,
};

inline const char* family_name(MeanFamily fam) {
    switch (fam) {
        case MeanFamily::WeightedArithmetic: return "arithmetic";
        case MeanFamily::WeightedGeometric: return "geometric";
        case MeanFamily::WeightedHarmonic: return "harmonic";
        case MeanFamily::WeightedLogarithmic: return "log";
        case MeanFamily::DualWeightedLogarithmic: return "duallog";
    }
    return "?";
}

struct Curvature {
    double kappa;  // -f''(1), nonnegative
};

struct RepresentingFunction {
    MeanFamily family;
    double alpha;  // weight in [0,1]
    double d1;     // f'(1)
    double d2;     // f''(1) <= 0

    Curvature curvature() const { return Curvature{-d2}; }

    double operator()(double x) const {
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::domain_error(
                "representing function: argument must be positive and finite, got " +
                std::to_string(x));
        if (x == 1.0) return 1.0;  // exact normalization
        const double h = x - 1.0;
        switch (family) {
            case MeanFamily::WeightedArithmetic:
                return (1.0 - alpha) + alpha * x;
            case MeanFamily::WeightedGeometric:
                return std::pow(x, alpha);
            case MeanFamily::WeightedHarmonic:
                return x / ((1.0 - alpha) * x + alpha);
            case MeanFamily::WeightedLogarithmic: {
                if (std::abs(h) < 1e-6)
                    return 1.0 + 0.5 * h + (alpha - 2.0) / 12.0 * h * h;
                if (alpha == 0.0) return (1.0 + h) * std::log1p(h) / h;
                if (alpha == 1.0) return h / std::log1p(h);
                const double num = std::expm1(alpha * std::log1p(h));
                const double den = std::expm1((alpha - 1.0) * std::log1p(h));
                return ((alpha - 1.0) / alpha) * num / den;
            }
            case MeanFamily::DualWeightedLogarithmic: {
                if (std::abs(h) < 1e-6)
                    return 1.0 + 0.5 * h - (alpha + 1.0) / 12.0 * h * h;
                if (alpha == 0.0) return h / std::log1p(h);
                if (alpha == 1.0) return (1.0 + h) * std::log1p(h) / h;
                const double num = std::expm1((alpha - 1.0) * std::log1p(h));
                const double den = std::expm1(alpha * std::log1p(h));
                return (alpha / (alpha - 1.0)) * (1.0 + h) * num / den;
            }
        }
        throw std::logic_error("representing function: unknown family");
    }
};

namespace detail {

// Richardson extrapolation of a quantity with even-power error expansion,
// sampled at h, h/2, h/4 with h = 1e-3. Kills the h^2 and h^4 terms.
template <typename F>
double richardson3(F&& d) {
    const double h = 1e-3;
    const double d1 = d(h), d2 = d(h / 2.0), d3 = d(h / 4.0);
    const double r12 = (4.0 * d2 - d1) / 3.0;
    const double r23 = (4.0 * d3 - d2) / 3.0;
    return (16.0 * r23 - r12) / 15.0;
}

}  // namespace detail

inline Curvature curvature_numeric(const RepresentingFunction& f) {
    const double second = detail::richardson3(
        [&](double h) { return (f(1.0 + h) - 2.0 + f(1.0 - h)) / (h * h); });
    double kappa = -second;
    if (kappa < 0.0) {
        if (kappa < -1e-8)
            throw std::domain_error("curvature_numeric: f is convex at 1, kappa = " +
                                    std::to_string(kappa));
        kappa = 0.0;  // roundoff around an affine function
    }
    return Curvature{kappa};
}

inline double fprime_numeric(const RepresentingFunction& f) {
    return detail::richardson3(
        [&](double h) { return (f(1.0 + h) - f(1.0 - h)) / (2.0 * h); });
}

inline RepresentingFunction make_mean(MeanFamily fam, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("make_mean: weight must lie in [0,1], got " +
                                    std::to_string(alpha));
    RepresentingFunction f{fam, alpha, 0.0, 0.0};
    switch (fam) {
        case MeanFamily::WeightedArithmetic:
            f.d1 = alpha;
            f.d2 = 0.0;
            break;
        case MeanFamily::WeightedGeometric:
            f.d1 = alpha;
            f.d2 = alpha * (alpha - 1.0);
            break;
        case MeanFamily::WeightedHarmonic:
            f.d1 = alpha;
            f.d2 = -2.0 * alpha * (1.0 - alpha);
            break;
        case MeanFamily::WeightedLogarithmic:
        case MeanFamily::DualWeightedLogarithmic:
            // no trusted closed form for these; the finite-difference oracle
            // is authoritative (f'(1) lands at 1/2 for every weight)
            f.d1 = fprime_numeric(f);
            f.d2 = -curvature_numeric(f).kappa;
            break;
    }
    return f;
}

// "<family>:<alpha>", e.g. "geometric:0.5"
inline RepresentingFunction parse_mean_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("mean spec '" + spec + "': expected <family>:<alpha>");
    const std::string name = spec.substr(0, colon);
    const std::string alpha_str = spec.substr(colon + 1);
    MeanFamily fam;
    if (name == "arithmetic") fam = MeanFamily::WeightedArithmetic;
    else if (name == "geometric") fam = MeanFamily::WeightedGeometric;
    else if (name == "harmonic") fam = MeanFamily::WeightedHarmonic;
    else if (name == "log") fam = MeanFamily::WeightedLogarithmic;
    else if (name == "duallog") fam = MeanFamily::DualWeightedLogarithmic;
    else
        throw std::invalid_argument("mean spec '" + spec + "': unknown family '" + name +
                                    "' (expected arithmetic|geometric|harmonic|log|duallog)");
    double alpha = 0.0;
    try {
        std::size_t pos = 0;
        alpha = std::stod(alpha_str, &pos);
        if (pos != alpha_str.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
        throw std::invalid_argument("mean spec '" + spec + "': cannot parse weight '" +
                                    alpha_str + "'");
    }
    return make_mean(fam, alpha);
}

inline std::string mean_spec_string(const RepresentingFunction& f) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), f.alpha);  // shortest round-trip
    return std::string(family_name(f.family)) + ":" + std::string(buf, res.ptr);
}

namespace detail {

inline EigenSystem pd_eigh(const Matrix& m, const char* name, double herm_tol) {
    EigenSystem es = eigh(HermitianMatrix(m, herm_tol));
    const double lmax =
        std::max({std::abs(es.eigenvalues.front()), std::abs(es.eigenvalues.back()), 1.0});
    if (!(es.eigenvalues.front() > 1e-12 * lmax))
        throw std::domain_error(std::string("mean: ") + name +
                                " is not positive definite, min eigenvalue " +
                                std::to_string(es.eigenvalues.front()));
    return es;
}

inline Matrix spectral_power(const EigenSystem& es, double p) {
    const std::size_t n = es.eigenvalues.size();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = std::pow(es.eigenvalues[i], p);
    return es.eigenvectors * d * es.eigenvectors.adjoint();
}

}  // namespace detail

// A sigma B = A^{1/2} f(A^{-1/2} B A^{-1/2}) A^{1/2} for positive definite A, B
inline Matrix mean(const RepresentingFunction& f, const Matrix& a, const Matrix& b) {
    a.require_square("mean");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mean: operand shapes differ");
    EigenSystem ea = detail::pd_eigh(a, "A", 1e-12);
    detail::pd_eigh(b, "B", 1e-12);

    const double cond = ea.eigenvalues.back() / ea.eigenvalues.front();
    if (cond > 1e8)
        std::fprintf(stderr, "mean: warning: cond(A) = %.3g, result accuracy degrades\n", cond);

    const Matrix asqrt = detail::spectral_power(ea, 0.5);
    const Matrix ainvsqrt = detail::spectral_power(ea, -0.5);
    const Matrix c = ainvsqrt * b * ainvsqrt;
    const Matrix fc = apply_spectral_function(HermitianMatrix(c, 1e-8), f);
    const Matrix result = asqrt * fc * asqrt;
    return HermitianMatrix(result, 1e-8).mat();
}

// componentwise a_i f(b_i / a_i): the mean of simultaneously diagonal operators
inline std::vector<double> mean_commuting(const RepresentingFunction& f,
                                          const std::vector<double>& a,
                                          const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("mean_commuting: coefficient vectors differ in length");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0) || !(b[i] > 0.0))
            throw std::domain_error("mean_commuting: nonpositive coefficient at index " +
                                    std::to_string(i));
        out[i] = a[i] * f(b[i] / a[i]);
    }
    return out;
}

// Continuity extension of the mean to positive semidefinite A, B sharing a
// common support: compress to the support of A + B, take the mean there, and
// lift back. Throws if the compressed operators are not positive definite,
// i.e. if the supports genuinely differ.
inline Matrix mean_on_support(const RepresentingFunction& f, const Matrix& a, const Matrix& b,
                              double support_tol = 1e-10) {
    a.require_square("mean_on_support");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("mean_on_support: operand shapes differ");
    const std::size_t n = a.rows();
    EigenSystem es = eigh(HermitianMatrix(a + b, 1e-8));
    const double lmax = std::max(std::abs(es.eigenvalues.back()), 1.0);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (es.eigenvalues[i] > support_tol * lmax) keep.push_back(i);
    if (keep.empty()) return Matrix::zero(n, n);

    Matrix q(n, keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) q(i, j) = es.eigenvectors(i, keep[j]);

    const Matrix ac = q.adjoint() * a * q;
    const Matrix bc = q.adjoint() * b * q;
    Matrix mc;
    try {
        mc = mean(f, ac, bc);
    } catch (const std::domain_error& e) {
        throw std::domain_error(std::string("mean_on_support: operands do not share a common "
                                            "support (") + e.what() + ")");
    }
    return q * mc * q.adjoint();
}

}  // namespace conerig
