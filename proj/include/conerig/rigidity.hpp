#pragma once

// The two-qubit counterexample machinery and the theorem-level verification
// drivers. Everything is built from one family of operators diagonal in the
// fixed orthonormal basis {u, v, s, a} of C^2 (x) C^2:
//   X(alpha, beta, gamma) = alpha (uu* + vv*) + beta ss* + gamma aa*.
// Such operators commute, their means stay in the family, and the partial
// transpose spectrum has a closed form, so every numerical claim can be
// cross-checked against exact coefficient arithmetic.

#include <algorithm>
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

namespace conerig {

struct MagicBasis {
    Matrix u, v, s, a;  // 4x1 columns

    MagicBasis() : u(4, 1), v(4, 1), s(4, 1), a(4, 1) {
        const double r = 1.0 / std::sqrt(2.0);
        u(0, 0) = 1.0;
        v(3, 0) = 1.0;
        s(1, 0) = r;
        s(2, 0) = r;
        a(1, 0) = r;
        a(2, 0) = -r;
    }
};

// alpha (uu* + vv*) + beta ss* + gamma aa*, stored by its three coefficients
struct XFormOperator {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;

    Matrix to_matrix() const {
        Matrix x(4, 4);
        x(0, 0) = alpha;
        x(3, 3) = alpha;
        x(1, 1) = (beta + gamma) / 2.0;
        x(2, 2) = (beta + gamma) / 2.0;
        x(1, 2) = (beta - gamma) / 2.0;
        x(2, 1) = (beta - gamma) / 2.0;
        return x;
    }

    BipartiteOperator to_bipartite() const { return BipartiteOperator(2, 2, to_matrix()); }

    std::vector<double> coefficients() const { return {alpha, alpha, beta, gamma}; }

    std::vector<double> spectrum_closed() const {
        std::vector<double> s{alpha, alpha, beta, gamma};
        std::sort(s.begin(), s.end());
        return s;
    }

    std::vector<double> pt_spectrum_closed() const {
        const double mid = (beta + gamma) / 2.0;
        std::vector<double> s{mid, mid, alpha + (beta - gamma) / 2.0,
                              alpha - (beta - gamma) / 2.0};
        std::sort(s.begin(), s.end());
        return s;
    }

    bool psd_closed() const { return alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0; }

    XFormOperator shifted(double delta) const {
        return {alpha + delta, beta + delta, gamma + delta};
    }
};

// the operator pair A_eps, B_eps plus an optional interior shift c*eps^2
struct RigidityPair {
    double epsilon = 0.0;
    double c = 0.0;     // shift coefficient; the shift itself is c * eps^2
    XFormOperator A, B; // unshifted coefficients

    double shift() const { return c * epsilon * epsilon; }
    XFormOperator shifted_a() const { return A.shifted(shift()); }
    XFormOperator shifted_b() const { return B.shifted(shift()); }
};

inline RigidityPair build_pair(double epsilon, double c = 0.0) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("build_pair: epsilon must lie in (0,1), got " +
                                    std::to_string(epsilon));
    if (!(c >= 0.0))
        throw std::invalid_argument("build_pair: shift coefficient must be nonnegative, got " +
                                    std::to_string(c));
    RigidityPair p;
    p.epsilon = epsilon;
    p.c = c;
    p.A = {(1.0 + epsilon) / 2.0, (1.0 - epsilon) / 2.0, (3.0 + epsilon) / 2.0};
    p.B = {(1.0 - epsilon) / 2.0, (1.0 + epsilon) / 2.0, (3.0 - epsilon) / 2.0};
    return p;
}

// coefficients of the mean of two XForm operators (they commute)
inline XFormOperator xform_mean(const RepresentingFunction& f, const XFormOperator& a,
                                const XFormOperator& b) {
    auto m = mean_commuting(f, a.coefficients(), b.coefficients());
    return {m[0], m[2], m[3]};
}

// lambda_3 = alpha_eps + beta_eps/2 - gamma_eps/2 of the (unshifted) mean
inline double lambda3_closed_form(const RepresentingFunction& f, double epsilon) {
    const RigidityPair p = build_pair(epsilon);
    const XFormOperator m = xform_mean(f, p.A, p.B);
    return m.alpha + m.beta / 2.0 - m.gamma / 2.0;
}

struct Lambda3Report {
    std::vector<double> epsilons;
    std::vector<double> lambda3_exact;    // coefficient arithmetic
    std::vector<double> lambda3_numeric;  // min PT eigenvalue of the 4x4 mean
    double fitted_coefficient = 0.0;      // lambda3 / eps^2 extrapolated to 0
    double predicted = 0.0;               // -(4/3) kappa
};

namespace detail {

inline double min_pt_numeric(const Matrix& mean4, double herm_tol = 1e-8) {
    BipartiteOperator op(2, 2, mean4, herm_tol);
    return eigh(partial_transpose(op).mat).eigenvalues.front();
}

}  // namespace detail

inline Lambda3Report lambda3_scan(const RepresentingFunction& f,
                                  const std::vector<double>& eps_grid, double c = 0.0) {
    if (eps_grid.size() < 2)
        throw std::invalid_argument("lambda3_scan: need at least two grid points");
    for (std::size_t i = 0; i + 1 < eps_grid.size(); ++i)
        if (!(eps_grid[i] > eps_grid[i + 1]))
            throw std::invalid_argument("lambda3_scan: grid must be strictly descending");

    Lambda3Report rep;
    rep.predicted = -(4.0 / 3.0) * (-f.d2);
    for (double eps : eps_grid) {
        const RigidityPair p = build_pair(eps, c);
        const XFormOperator m = xform_mean(f, p.shifted_a(), p.shifted_b());
        rep.epsilons.push_back(eps);
        rep.lambda3_exact.push_back(m.alpha + m.beta / 2.0 - m.gamma / 2.0);
        const Matrix mean4 =
            mean(f, p.shifted_a().to_matrix(), p.shifted_b().to_matrix());
        rep.lambda3_numeric.push_back(detail::min_pt_numeric(mean4));
    }

    // model lambda3 = c2 eps^2 + c3 eps^3: eliminate the linear term of
    // y = lambda3/eps^2 from the two smallest grid points
    const std::size_t k = eps_grid.size();
    const double e1 = rep.epsilons[k - 2], e2 = rep.epsilons[k - 1];
    const double y1 = rep.lambda3_exact[k - 2] / (e1 * e1);
    const double y2 = rep.lambda3_exact[k - 1] / (e2 * e2);
    rep.fitted_coefficient = (y1 * e2 - y2 * e1) / (e2 - e1);
    return rep;
}

struct TheoremReport {
    std::string theorem;    // main1 | main2 | main3 | main4 | ent-rig
    std::string mean_spec;  // e.g. "geometric:0.5"
    double epsilon = 0.0;
    double c = 0.0;
    std::size_t m = 0, n = 0, r = 0;
    std::vector<ConeVerdict> input_verdicts;
    ConeVerdict mean_verdict;
    double lambda3_exact = 0.0;
    double lambda3_numeric = 0.0;
    double kappa = 0.0;
    double fitted = 0.0;
    bool has_fitted = false;
    std::string conclusion;  // violated | preserved | inconclusive
    std::vector<std::pair<std::string, double>> metrics;
    std::string notes;
};

namespace detail {

// The decision logic shared by every theorem driver. A mean that leaves the
// cone proves the rigidity statement at this epsilon ("violated"). A mean
// that stays inside proves nothing unless the curvature vanishes, in which
// case staying inside is exactly the claim ("preserved").
inline std::string conclude(double min_pt, double tol, double kappa) {
    if (min_pt < -tol) return "violated";
    if (kappa <= 1e-8) return "preserved";
    return "inconclusive";
}

}  // namespace detail

// Two-qubit statement: separable A, B whose non-arithmetic mean leaves the
// separable cone; with 0 < c < (4/3) kappa the inputs move to the interior
// and the violation survives.
inline TheoremReport verify_thm_main1(const RepresentingFunction& f, double epsilon,
                                      double c = 0.0, double tol = -1.0) {
    const RigidityPair p = build_pair(epsilon, c);
    TheoremReport rep;
    rep.theorem = "main1";
    rep.mean_spec = mean_spec_string(f);
    rep.epsilon = epsilon;
    rep.c = c;
    rep.m = rep.n = 2;
    rep.kappa = -f.d2;

    const BipartiteOperator a_op = p.shifted_a().to_bipartite();
    const BipartiteOperator b_op = p.shifted_b().to_bipartite();
    rep.input_verdicts.push_back(is_separable_small(a_op, tol));
    rep.input_verdicts.push_back(is_separable_small(b_op, tol));

    const Matrix mean4 = mean(f, a_op.mat, b_op.mat);
    const XFormOperator mean_coeff = xform_mean(f, p.shifted_a(), p.shifted_b());
    const double path_residual = mean4.max_abs_diff(mean_coeff.to_matrix());

    BipartiteOperator mean_op(2, 2, mean4, 1e-8);
    rep.mean_verdict = is_separable_small(mean_op, tol);
    rep.lambda3_exact = mean_coeff.alpha + mean_coeff.beta / 2.0 - mean_coeff.gamma / 2.0;
    rep.lambda3_numeric = rep.mean_verdict.min_pt_eigenvalue;

    rep.metrics.emplace_back("path_residual", path_residual);
    rep.metrics.emplace_back("input_a_min_pt", rep.input_verdicts[0].min_pt_eigenvalue);
    rep.metrics.emplace_back("input_b_min_pt", rep.input_verdicts[1].min_pt_eigenvalue);
    if (c > 0.0) {
        const bool ia = is_ppt_interior(a_op, tol), ib = is_ppt_interior(b_op, tol);
        rep.metrics.emplace_back("inputs_interior", (ia && ib) ? 1.0 : 0.0);
        rep.metrics.emplace_back("shift_bound_4k3", (4.0 / 3.0) * rep.kappa);
    }

    const double use_tol = (tol >= 0.0) ? tol : cone_tolerance(mean4);
    rep.conclusion = detail::conclude(rep.lambda3_numeric, use_tol, rep.kappa);
    if (rep.conclusion == "inconclusive")
        rep.notes = "mean stayed inside the cone at this epsilon/shift; no conclusion";
    return rep;
}

// Lift to m (x) n by canonical local isometries; the violation is inherited
// verbatim because the embedding commutes with the partial transpose.
inline TheoremReport lift_counterexample(const RepresentingFunction& f, double epsilon,
                                         std::size_t m, std::size_t n, double tol = -1.0) {
    if (m < 2 || n < 2)
        throw std::invalid_argument("lift_counterexample: target dimensions must be >= 2");
    const RigidityPair p = build_pair(epsilon);
    TheoremReport rep;
    rep.theorem = "main2";
    rep.mean_spec = mean_spec_string(f);
    rep.epsilon = epsilon;
    rep.m = m;
    rep.n = n;
    rep.kappa = -f.d2;

    const LocalIsometryPair iso(canonical_isometry(2, m), canonical_isometry(2, n));
    const BipartiteOperator a2 = p.A.to_bipartite(), b2 = p.B.to_bipartite();
    const BipartiteOperator a_lift = embed(a2, iso), b_lift = embed(b2, iso);

    // separable by construction: the isometry maps each product term of a
    // Peres-Horodecki-certified 2x2 operator to a product term
    for (const auto* base : {&a2, &b2}) {
        const auto* lifted = (base == &a2) ? &a_lift : &b_lift;
        ConeVerdict v = is_separable_small(*base, tol);
        ConeVerdict lv = is_ppt(*lifted, tol);
        lv.member = v.member && lv.member;
        lv.certificate = Certificate::StructuralLemma;
        lv.detail = "local isometry image of a separable 2x2 operator";
        rep.input_verdicts.push_back(lv);
    }

    // mean on the common support vs the pushed-forward 2x2 mean
    const Matrix mean2 = mean(f, a2.mat, b2.mat);
    const Matrix via_support = mean_on_support(f, a_lift.mat, b_lift.mat);
    const Matrix vw = kron(iso.V, iso.W);
    const Matrix pushed = vw * mean2 * vw.adjoint();
    const double atilde_residual = (via_support - pushed).frobenius_norm();

    BipartiteOperator mean_lift(m, n, via_support, 1e-8);
    rep.mean_verdict = is_ppt(mean_lift, tol);
    rep.lambda3_exact = lambda3_closed_form(f, epsilon);
    rep.lambda3_numeric = rep.mean_verdict.min_pt_eigenvalue;

    rep.metrics.emplace_back("atilde_residual", atilde_residual);
    rep.metrics.emplace_back("min_pt_2x2", detail::min_pt_numeric(mean2));
    rep.metrics.emplace_back("min_pt_match",
                             std::abs(rep.lambda3_numeric - detail::min_pt_numeric(mean2)));

    const double use_tol = (tol >= 0.0) ? tol : cone_tolerance(via_support);
    rep.conclusion = detail::conclude(rep.lambda3_numeric, use_tol, rep.kappa);
    if (rep.conclusion == "inconclusive")
        rep.notes = "lifted mean stayed PPT at this epsilon; no conclusion";
    return rep;
}

// Tensor with P_r = psi_r psi_r^* and regroup: Schmidt numbers multiply, so
// the 2x2 violation amplifies to S_r inputs with a mean outside S_{2r-1}.
inline TheoremReport schmidt_amplify(const RepresentingFunction& f, std::size_t r,
                                     double epsilon, double tol = -1.0) {
    if (r < 1) throw std::invalid_argument("schmidt_amplify: r must be >= 1");
    const RigidityPair p = build_pair(epsilon);
    TheoremReport rep;
    rep.theorem = "main4";
    rep.mean_spec = mean_spec_string(f);
    rep.epsilon = epsilon;
    rep.r = r;
    rep.m = rep.n = 2 * r;
    rep.kappa = -f.d2;

    // psi_r = sum e_j (x) e_j, unnormalized, SR = r
    Matrix psi(r * r, 1);
    for (std::size_t j = 0; j < r; ++j) psi(j * r + j, 0) = 1.0;
    const SchmidtInfo psi_info = schmidt_rank(psi, r, r);
    const Matrix pr = psi * psi.adjoint();

    const BipartiteOperator a2 = p.A.to_bipartite(), b2 = p.B.to_bipartite();
    const BipartiteOperator a_big =
        swap_middle_factors(kron_op(pr, a2.mat, 1e-10), r);
    const BipartiteOperator b_big =
        swap_middle_factors(kron_op(pr, b2.mat, 1e-10), r);

    const SchmidtNumberBound a_bound =
        schmidt_number_pure_tensor(psi_info, schmidt_number_2x2(a2, tol));
    const SchmidtNumberBound b_bound =
        schmidt_number_pure_tensor(psi_info, schmidt_number_2x2(b2, tol));
    for (const auto* pr_bound : {&a_bound, &b_bound}) {
        const auto* big = (pr_bound == &a_bound) ? &a_big : &b_big;
        ConeVerdict v;
        v.member = pr_bound->upper <= r;  // inside S_r
        v.certificate = Certificate::StructuralLemma;
        v.min_eigenvalue = eigh(big->mat).eigenvalues.front();
        v.pt_spectrum = eigh(partial_transpose(*big).mat).eigenvalues;
        v.min_pt_eigenvalue = v.pt_spectrum.front();
        v.detail = "SN <= " + std::to_string(pr_bound->upper) +
                   " = SR(psi) * SN(2x2 block), method " + pr_bound->method;
        rep.input_verdicts.push_back(v);
    }

    if (f.family == MeanFamily::WeightedArithmetic) {
        // convex combinations preserve every Schmidt-number cone
        const Matrix mean_big = mean_on_support(f, a_big.mat, b_big.mat);
        rep.mean_verdict = is_ppt(BipartiteOperator(2 * r, 2 * r, mean_big, 1e-8), tol);
        rep.mean_verdict.member = true;  // convex combination of S_r members stays in S_r
        rep.mean_verdict.certificate = Certificate::StructuralLemma;
        rep.mean_verdict.detail = "SN <= r: arithmetic mean of S_r members";
        rep.lambda3_exact = lambda3_closed_form(f, epsilon);
        rep.lambda3_numeric = detail::min_pt_numeric(mean(f, a2.mat, b2.mat));
        rep.conclusion = "preserved";
        rep.notes = "no amplification; the arithmetic mean preserves S_r";
        return rep;
    }

    // mean of the regrouped operators, against the tensor-congruence identity
    const Matrix mean2 = mean(f, a2.mat, b2.mat);
    const Matrix mean_big = mean_on_support(f, a_big.mat, b_big.mat);
    const Matrix expected =
        swap_middle_factors(kron_op(pr, mean2, 1e-8), r).mat;
    const double tensor_residual = (mean_big - expected).frobenius_norm();

    const SchmidtNumberBound block = schmidt_number_2x2(BipartiteOperator(2, 2, mean2, 1e-8), tol);
    const SchmidtNumberBound mean_bound = schmidt_number_pure_tensor(psi_info, block);

    rep.mean_verdict.member = mean_bound.lower <= 2 * r - 1;  // in S_{2r-1}?
    rep.mean_verdict.certificate = Certificate::StructuralLemma;
    rep.mean_verdict.min_eigenvalue = eigh(mean_big, 1e-8).eigenvalues.front();
    rep.mean_verdict.pt_spectrum =
        eigh(partial_transpose(BipartiteOperator(2 * r, 2 * r, mean_big, 1e-8)).mat).eigenvalues;
    rep.mean_verdict.min_pt_eigenvalue = rep.mean_verdict.pt_spectrum.front();
    rep.mean_verdict.detail = "SN = " + std::to_string(mean_bound.lower) + " vs cone bound " +
                              std::to_string(2 * r - 1) + ", method " + mean_bound.method;

    rep.lambda3_exact = lambda3_closed_form(f, epsilon);
    rep.lambda3_numeric = detail::min_pt_numeric(mean2);
    rep.metrics.emplace_back("tensor_congruence_residual", tensor_residual);
    rep.metrics.emplace_back("input_sn_upper", static_cast<double>(a_bound.upper));
    rep.metrics.emplace_back("mean_sn_lower", static_cast<double>(mean_bound.lower));
    rep.metrics.emplace_back("mean_sn_upper", static_cast<double>(mean_bound.upper));

    const double use_tol = (tol >= 0.0) ? tol : cone_tolerance(mean2);
    rep.conclusion = detail::conclude(rep.lambda3_numeric, use_tol, rep.kappa);
    if (rep.conclusion == "inconclusive")
        rep.notes = "2x2 block stayed PPT at this epsilon; no amplification to certify";
    return rep;
}

// Sandwich argument: any convex cone C with S_1 <= C <= PPT contains the
// inputs (they are separable) and excludes the mean (it is not PPT).
inline TheoremReport verify_intermediate_cone(const RepresentingFunction& f, double epsilon,
                                              std::size_t m, std::size_t n, double tol = -1.0) {
    TheoremReport rep = (m == 2 && n == 2) ? verify_thm_main1(f, epsilon, 0.0, tol)
                                           : lift_counterexample(f, epsilon, m, n, tol);
    rep.theorem = "main3";
    rep.m = m;
    rep.n = n;
    if (rep.conclusion == "violated")
        rep.notes = "inputs lie in S_1, hence in every intermediate cone C; the mean is not "
                    "PPT, hence outside every such C";
    else if (rep.conclusion == "preserved")
        rep.notes = "zero curvature: the mean is a convex combination and every convex cone "
                    "between S_1 and PPT is closed under it";
    return rep;
}

}  // namespace conerig
