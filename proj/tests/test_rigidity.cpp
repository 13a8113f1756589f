#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "conerig/rigidity.hpp"
#include "test_support.hpp"

using namespace conerig;

namespace {

double metric(const TheoremReport& rep, const std::string& key) {
    for (const auto& [name, val] : rep.metrics)
        if (name == key) return val;
    FAIL("report has no metric named " << key);
    return 0.0;
}

RepresentingFunction fam(MeanFamily f, double alpha) { return make_mean(f, alpha); }

}  // namespace

TEST_CASE("magic basis is orthonormal and assembles the xform matrix") {
    MagicBasis mb;
    const Matrix* cols[4] = {&mb.u, &mb.v, &mb.s, &mb.a};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Complex ip = (cols[i]->adjoint() * (*cols[j]))(0, 0);
            REQUIRE_THAT(ip.real(), Catch::Matchers::WithinAbs(i == j ? 1.0 : 0.0, 1e-15));
            REQUIRE_THAT(ip.imag(), Catch::Matchers::WithinAbs(0.0, 1e-15));
        }

    const double al = 0.7, be = 1.3, ga = 0.2;
    Matrix assembled = mb.u * mb.u.adjoint() + mb.v * mb.v.adjoint();
    assembled = assembled * al + mb.s * mb.s.adjoint() * be + mb.a * mb.a.adjoint() * ga;
    const XFormOperator x{al, be, ga};
    REQUIRE(x.to_matrix().max_abs_diff(assembled) < 1e-15);
}

TEST_CASE("xform closed-form spectra and psd rule") {
    const XFormOperator x{0.7, 1.3, 0.2};
    const std::vector<double> spec = x.spectrum_closed();
    REQUIRE(spec == std::vector<double>{0.2, 0.7, 0.7, 1.3});

    auto es = eigh(x.to_matrix());
    for (int i = 0; i < 4; ++i)
        REQUIRE_THAT(es.eigenvalues[i], Catch::Matchers::WithinAbs(spec[i], 1e-13));

    REQUIRE(XFormOperator{0.5, 0.0, 1.0}.psd_closed());
    REQUIRE_FALSE(XFormOperator{0.5, -0.01, 1.0}.psd_closed());
    REQUIRE(eigh(XFormOperator{0.5, -0.01, 1.0}.to_matrix()).eigenvalues.front() < 0.0);
}

TEST_CASE("xform spectra match the eigensolver on random coefficients", "[property]") {
    testsupport::Rng rng(0x5eed0031u);
    for (int trial = 0; trial < 200; ++trial) {
        const XFormOperator x{testsupport::uniform(rng, 0.0, 3.0),
                              testsupport::uniform(rng, 0.0, 3.0),
                              testsupport::uniform(rng, 0.0, 3.0)};
        const auto spec = x.spectrum_closed();
        const auto es = eigh(x.to_matrix());
        const auto pt = x.pt_spectrum_closed();
        const auto pt_es = eigh(partial_transpose(x.to_bipartite()).mat);
        for (int i = 0; i < 4; ++i) {
            REQUIRE_THAT(es.eigenvalues[i], Catch::Matchers::WithinAbs(spec[i], 1e-11));
            REQUIRE_THAT(pt_es.eigenvalues[i], Catch::Matchers::WithinAbs(pt[i], 1e-11));
        }
    }
}

TEST_CASE("build_pair frozen values") {
    SECTION("pt spectra at eps = 0.1") {
        const RigidityPair p = build_pair(0.1);
        const std::vector<double> pa = p.A.pt_spectrum_closed();
        const std::vector<double> pb = p.B.pt_spectrum_closed();
        const double expa[4] = {0.0, 1.0, 1.0, 1.1}, expb[4] = {0.0, 0.9, 1.0, 1.0};
        for (int i = 0; i < 4; ++i) {
            REQUIRE_THAT(pa[i], Catch::Matchers::WithinAbs(expa[i], 1e-15));
            REQUIRE_THAT(pb[i], Catch::Matchers::WithinAbs(expb[i], 1e-15));
        }
        // operators themselves are positive definite
        REQUIRE(p.A.spectrum_closed().front() > 0.4);
        REQUIRE(p.B.spectrum_closed().front() > 0.4);
    }

    SECTION("coefficients at eps = 0.5") {
        const RigidityPair p = build_pair(0.5);
        REQUIRE(p.A.alpha == 0.75);
        REQUIRE(p.A.beta == 0.25);
        REQUIRE(p.A.gamma == 1.75);
    }

    SECTION("interior shift moves both operators off the PPT boundary") {
        const RigidityPair p0 = build_pair(0.1);
        const RigidityPair p = build_pair(0.1, 0.1);
        REQUIRE_THAT(p.shift(), Catch::Matchers::WithinAbs(1e-3, 1e-18));
        REQUIRE_THAT(p.shifted_a().alpha, Catch::Matchers::WithinAbs(0.551, 1e-15));
        REQUIRE_FALSE(is_ppt_interior(p0.shifted_a().to_bipartite()));
        REQUIRE(is_ppt_interior(p.shifted_a().to_bipartite()));
        REQUIRE(is_ppt_interior(p.shifted_b().to_bipartite()));
    }

    SECTION("reduced state on the first factor is a multiple of the identity") {
        const Matrix red = partial_trace_second(build_pair(0.1).A.to_bipartite());
        REQUIRE(red.max_abs_diff(Matrix::identity(2) * 1.55) < 1e-15);
    }

    SECTION("contract") {
        REQUIRE_THROWS_AS(build_pair(0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(build_pair(1.0), std::invalid_argument);
        REQUIRE_THROWS_AS(build_pair(-0.2), std::invalid_argument);
        REQUIRE_THROWS_AS(build_pair(0.1, -0.1), std::invalid_argument);
    }
}

TEST_CASE("lambda3 closed form against frozen values") {
    SECTION("arithmetic means cancel exactly") {
        for (double al : {0.0, 0.3, 1.0})
            for (double eps : {0.1, 0.01})
                REQUIRE(std::abs(lambda3_closed_form(
                            fam(MeanFamily::WeightedArithmetic, al), eps)) <= 1e-15);
    }

    SECTION("geometric") {
        const auto f = fam(MeanFamily::WeightedGeometric, 0.5);
        REQUIRE_THAT(lambda3_closed_form(f, 0.1),
                     Catch::Matchers::WithinAbs(-0.0033426396982825271964, 1e-15));
        REQUIRE_THAT(lambda3_closed_form(f, 0.05),
                     Catch::Matchers::WithinAbs(-0.00083391276960045930528, 1e-15));
    }

    SECTION("harmonic 0.5 is exactly -(2/3) eps^2 at every eps") {
        const auto f = fam(MeanFamily::WeightedHarmonic, 0.5);
        for (double eps : {0.1, 0.05, 0.025, 0.3})
            REQUIRE_THAT(lambda3_closed_form(f, eps),
                         Catch::Matchers::WithinAbs(-(2.0 / 3.0) * eps * eps, 1e-15));
    }

    SECTION("logarithmic endpoint") {
        REQUIRE_THAT(lambda3_closed_form(fam(MeanFamily::WeightedLogarithmic, 1.0), 0.05),
                     Catch::Matchers::WithinAbs(-0.00055596762396180526803, 1e-15));
    }

    SECTION("contract") {
        REQUIRE_THROWS_AS(
            lambda3_closed_form(fam(MeanFamily::WeightedGeometric, 0.5), 0.0),
            std::invalid_argument);
    }
}

TEST_CASE("lambda3 law: negative, quadratic order, curvature coefficient", "[property]") {
    struct Probe { MeanFamily family; double alpha; };
    const Probe probes[] = {
        {MeanFamily::WeightedGeometric, 0.25},  {MeanFamily::WeightedGeometric, 0.5},
        {MeanFamily::WeightedGeometric, 0.75},  {MeanFamily::WeightedHarmonic, 0.25},
        {MeanFamily::WeightedHarmonic, 0.5},    {MeanFamily::WeightedLogarithmic, 0.0},
        {MeanFamily::WeightedLogarithmic, 0.5}, {MeanFamily::WeightedLogarithmic, 1.0},
        {MeanFamily::DualWeightedLogarithmic, 0.25},
        {MeanFamily::DualWeightedLogarithmic, 0.75},
    };
    for (const auto& pr : probes) {
        const auto f = fam(pr.family, pr.alpha);
        const double kappa = -f.d2;
        REQUIRE(kappa > 1e-3);
        for (double eps : {0.05, 0.025, 0.0125}) {
            const double l3 = lambda3_closed_form(f, eps);
            REQUIRE(l3 < 0.0);                // ejection, no threshold
            REQUIRE(std::abs(l3) <= eps * eps);  // no linear term survives
        }
        // at the smallest probe the quadratic coefficient is within 5% of -(4/3) kappa
        const double y = lambda3_closed_form(f, 0.0125) / (0.0125 * 0.0125);
        REQUIRE_THAT(y, Catch::Matchers::WithinAbs(-(4.0 / 3.0) * kappa,
                                                   0.05 * (4.0 / 3.0) * kappa));
    }
}

TEST_CASE("lambda3_scan fits the curvature coefficient") {
    const std::vector<double> grid{0.1, 0.05, 0.025, 0.0125};

    SECTION("geometric 0.5") {
        const auto rep = lambda3_scan(fam(MeanFamily::WeightedGeometric, 0.5), grid);
        REQUIRE(rep.epsilons == grid);
        const double frozen[4] = {-0.0033426396982825271964, -0.00083391276960045930528,
                                  -0.00020836951374767989270, -0.000052085594073262035195};
        for (int i = 0; i < 4; ++i) {
            REQUIRE_THAT(rep.lambda3_exact[i], Catch::Matchers::WithinAbs(frozen[i], 1e-15));
            REQUIRE_THAT(rep.lambda3_numeric[i],
                         Catch::Matchers::WithinAbs(rep.lambda3_exact[i], 1e-10));
        }
        REQUIRE_THAT(rep.predicted, Catch::Matchers::WithinAbs(-1.0 / 3.0, 1e-15));
        REQUIRE_THAT(rep.fitted_coefficient,
                     Catch::Matchers::WithinAbs(-0.33330438214146622217, 5e-10));
        REQUIRE(std::abs(rep.fitted_coefficient - rep.predicted) <= 0.05 * std::abs(rep.predicted));
    }

    SECTION("harmonic 0.5 has a pure quadratic law, so the fit is exact") {
        const auto rep = lambda3_scan(fam(MeanFamily::WeightedHarmonic, 0.5), grid);
        REQUIRE_THAT(rep.fitted_coefficient, Catch::Matchers::WithinAbs(-2.0 / 3.0, 1e-12));
        for (int i = 0; i < 4; ++i)
            REQUIRE_THAT(rep.lambda3_numeric[i],
                         Catch::Matchers::WithinAbs(rep.lambda3_exact[i], 1e-10));
    }

    SECTION("logarithmic endpoint alpha = 1") {
        const auto rep = lambda3_scan(fam(MeanFamily::WeightedLogarithmic, 1.0), grid);
        REQUIRE_THAT(rep.fitted_coefficient,
                     Catch::Matchers::WithinAbs(-0.22220163416578630502, 5e-10));
        REQUIRE_THAT(rep.predicted, Catch::Matchers::WithinAbs(-2.0 / 9.0, 1e-6));
        REQUIRE(std::abs(rep.fitted_coefficient - rep.predicted) <= 0.05 * std::abs(rep.predicted));
        for (int i = 0; i < 4; ++i)
            REQUIRE_THAT(rep.lambda3_numeric[i],
                         Catch::Matchers::WithinAbs(rep.lambda3_exact[i], 1e-10));
    }

    SECTION("arithmetic stays identically zero") {
        const auto rep = lambda3_scan(fam(MeanFamily::WeightedArithmetic, 0.4), grid);
        for (double v : rep.lambda3_exact) REQUIRE(std::abs(v) <= 1e-15);
        for (double v : rep.lambda3_numeric) REQUIRE(std::abs(v) <= 1e-10);
        // rounding in lambda3 (~1e-16) is divided by eps^2 inside the fit
        REQUIRE(std::abs(rep.fitted_coefficient) <= 1e-11);
        REQUIRE(rep.predicted == 0.0);
    }

    SECTION("contract") {
        const auto f = fam(MeanFamily::WeightedGeometric, 0.5);
        REQUIRE_THROWS_AS(lambda3_scan(f, {0.0125, 0.025}), std::invalid_argument);
        REQUIRE_THROWS_AS(lambda3_scan(f, {0.1}), std::invalid_argument);
    }
}

TEST_CASE("interior shift: violation survives below (4/3) kappa and not far above") {
    const auto f = fam(MeanFamily::WeightedGeometric, 0.5);  // kappa = 1/4, threshold 1/3
    const double eps = 0.02;

    SECTION("shifted lambda3 frozen values") {
        auto shifted_l3 = [&](double c) {
            const RigidityPair p = build_pair(eps, c);
            const XFormOperator m = xform_mean(f, p.shifted_a(), p.shifted_b());
            return m.alpha + m.beta / 2.0 - m.gamma / 2.0;
        };
        REQUIRE_THAT(shifted_l3(0.0),
                     Catch::Matchers::WithinAbs(-0.00013334815114478301756, 1e-15));
        REQUIRE_THAT(shifted_l3(0.2),
                     Catch::Matchers::WithinAbs(-0.000053325036655183989818, 1e-15));
        REQUIRE_THAT(shifted_l3(0.6),
                     Catch::Matchers::WithinAbs(0.00010672116956933856167, 1e-15));
    }

    SECTION("below the threshold the interior inputs still eject the mean") {
        const TheoremReport rep = verify_thm_main1(f, eps, 0.2);
        REQUIRE(rep.conclusion == "violated");
        REQUIRE(metric(rep, "inputs_interior") == 1.0);
        REQUIRE_THAT(metric(rep, "shift_bound_4k3"),
                     Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
        REQUIRE(rep.input_verdicts[0].member);
        REQUIRE(rep.input_verdicts[1].member);
        REQUIRE(rep.mean_verdict.min_pt_eigenvalue < -1e-9);
    }

    SECTION("well above the threshold the mean stays inside") {
        const TheoremReport rep = verify_thm_main1(f, eps, 0.6);
        REQUIRE(rep.conclusion == "inconclusive");
        REQUIRE(rep.mean_verdict.member);
        REQUIRE_FALSE(rep.notes.empty());
        REQUIRE(rep.mean_verdict.min_pt_eigenvalue >= 0.0);
    }
}

TEST_CASE("verify_thm_main1 report content") {
    SECTION("geometric 0.5 at eps = 0.1") {
        const TheoremReport rep = verify_thm_main1(fam(MeanFamily::WeightedGeometric, 0.5), 0.1);
        REQUIRE(rep.theorem == "main1");
        REQUIRE(rep.mean_spec == "geometric:0.5");
        REQUIRE(rep.epsilon == 0.1);
        REQUIRE(rep.m == 2);
        REQUIRE(rep.n == 2);
        REQUIRE(rep.kappa == 0.25);
        REQUIRE(rep.input_verdicts.size() == 2);
        for (const auto& v : rep.input_verdicts) {
            REQUIRE(v.member);
            REQUIRE(v.certificate == Certificate::PeresHorodecki);
            REQUIRE_THAT(v.min_pt_eigenvalue, Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
        REQUIRE_FALSE(rep.mean_verdict.member);
        REQUIRE_THAT(rep.lambda3_numeric,
                     Catch::Matchers::WithinAbs(-0.0033426396982825271964, 1e-12));
        REQUIRE_THAT(rep.lambda3_exact,
                     Catch::Matchers::WithinAbs(rep.lambda3_numeric, 1e-10));
        REQUIRE(metric(rep, "path_residual") <= 1e-10);
        REQUIRE(rep.conclusion == "violated");
    }

    SECTION("every non-arithmetic family violates at eps = 0.05") {
        for (auto [family, alpha] :
             std::vector<std::pair<MeanFamily, double>>{{MeanFamily::WeightedGeometric, 0.25},
                                                        {MeanFamily::WeightedHarmonic, 0.7},
                                                        {MeanFamily::WeightedLogarithmic, 0.5},
                                                        {MeanFamily::DualWeightedLogarithmic, 0.25}}) {
            const TheoremReport rep = verify_thm_main1(fam(family, alpha), 0.05);
            INFO(rep.mean_spec);
            REQUIRE(rep.conclusion == "violated");
        }
    }

    SECTION("arithmetic is preserved") {
        const TheoremReport rep = verify_thm_main1(fam(MeanFamily::WeightedArithmetic, 0.3), 0.1);
        REQUIRE(rep.conclusion == "preserved");
        REQUIRE(rep.mean_verdict.member);
        REQUIRE(std::abs(rep.lambda3_exact) <= 1e-15);
        REQUIRE(rep.lambda3_numeric >= -1e-9);
    }

    SECTION("contract") {
        REQUIRE_THROWS_AS(verify_thm_main1(fam(MeanFamily::WeightedGeometric, 0.5), 1.5),
                          std::invalid_argument);
    }
}

TEST_CASE("lift_counterexample carries the violation to higher dimensions") {
    const auto f = fam(MeanFamily::WeightedGeometric, 0.5);
    const double frozen = -0.0033426396982825271964;

    SECTION("3x3") {
        const TheoremReport rep = lift_counterexample(f, 0.1, 3, 3);
        REQUIRE(rep.theorem == "main2");
        REQUIRE(rep.m == 3);
        REQUIRE(rep.n == 3);
        REQUIRE(rep.conclusion == "violated");
        REQUIRE_THAT(rep.lambda3_numeric, Catch::Matchers::WithinAbs(frozen, 1e-10));
        REQUIRE(metric(rep, "min_pt_match") <= 1e-10);
        REQUIRE(metric(rep, "atilde_residual") <= 1e-9);
        REQUIRE(rep.mean_verdict.pt_spectrum.size() == 9);
        for (const auto& v : rep.input_verdicts) {
            REQUIRE(v.member);
            REQUIRE(v.certificate == Certificate::StructuralLemma);
            REQUIRE(v.detail.find("isometry") != std::string::npos);
        }
    }

    SECTION("2x5") {
        const TheoremReport rep = lift_counterexample(f, 0.1, 2, 5);
        REQUIRE(rep.m == 2);
        REQUIRE(rep.n == 5);
        REQUIRE(rep.conclusion == "violated");
        REQUIRE_THAT(rep.lambda3_numeric, Catch::Matchers::WithinAbs(frozen, 1e-10));
        REQUIRE(metric(rep, "atilde_residual") <= 1e-9);
    }

    SECTION("2x2 lift is the identity and reduces to the two-qubit statement") {
        const TheoremReport lifted = lift_counterexample(f, 0.1, 2, 2);
        const TheoremReport base = verify_thm_main1(f, 0.1);
        REQUIRE_THAT(lifted.lambda3_numeric,
                     Catch::Matchers::WithinAbs(base.lambda3_numeric, 1e-12));
        REQUIRE(lifted.conclusion == "violated");
    }

    SECTION("arithmetic lifts stay preserved") {
        const TheoremReport rep =
            lift_counterexample(fam(MeanFamily::WeightedArithmetic, 0.5), 0.1, 3, 3);
        REQUIRE(rep.conclusion == "preserved");
        REQUIRE(rep.mean_verdict.member);
    }

    SECTION("contract") {
        REQUIRE_THROWS_AS(lift_counterexample(f, 0.1, 1, 3), std::invalid_argument);
        REQUIRE_THROWS_AS(lift_counterexample(f, 0.1, 3, 1), std::invalid_argument);
    }
}

TEST_CASE("schmidt_amplify multiplies the Schmidt number gap") {
    const auto f = fam(MeanFamily::WeightedGeometric, 0.5);
    const double frozen = -0.0033426396982825271964;

    SECTION("r = 2 doubles to Schmidt number 4 in 4x4") {
        const TheoremReport rep = schmidt_amplify(f, 2, 0.1);
        REQUIRE(rep.theorem == "main4");
        REQUIRE(rep.r == 2);
        REQUIRE(rep.m == 4);
        REQUIRE(rep.n == 4);
        REQUIRE(metric(rep, "input_sn_upper") == 2.0);
        REQUIRE(metric(rep, "mean_sn_lower") == 4.0);
        REQUIRE(metric(rep, "mean_sn_upper") == 4.0);
        REQUIRE(metric(rep, "tensor_congruence_residual") <= 1e-9);
        for (const auto& v : rep.input_verdicts) {
            REQUIRE(v.member);
            REQUIRE(v.certificate == Certificate::StructuralLemma);
            REQUIRE(v.detail.find("SN <= 2") != std::string::npos);
        }
        REQUIRE_FALSE(rep.mean_verdict.member);
        REQUIRE(rep.mean_verdict.detail.find("SN = 4") != std::string::npos);
        REQUIRE_THAT(rep.lambda3_numeric, Catch::Matchers::WithinAbs(frozen, 1e-10));
        REQUIRE(rep.conclusion == "violated");
    }

    SECTION("r = 1 reduces to the two-qubit statement") {
        const TheoremReport rep = schmidt_amplify(f, 1, 0.1);
        REQUIRE(rep.m == 2);
        REQUIRE(rep.n == 2);
        REQUIRE(metric(rep, "mean_sn_lower") == 2.0);
        const TheoremReport base = verify_thm_main1(f, 0.1);
        REQUIRE_THAT(rep.lambda3_numeric,
                     Catch::Matchers::WithinAbs(base.lambda3_numeric, 1e-12));
        REQUIRE(rep.conclusion == "violated");
    }

    SECTION("r = 3 reaches Schmidt number 6 in 6x6") {
        const TheoremReport rep = schmidt_amplify(f, 3, 0.1);
        REQUIRE(rep.m == 6);
        REQUIRE(rep.n == 6);
        REQUIRE(metric(rep, "mean_sn_lower") == 6.0);
        REQUIRE(metric(rep, "tensor_congruence_residual") <= 1e-9);
        REQUIRE(rep.conclusion == "violated");
    }

    SECTION("arithmetic does not amplify") {
        const TheoremReport rep =
            schmidt_amplify(fam(MeanFamily::WeightedArithmetic, 0.5), 2, 0.1);
        REQUIRE(rep.conclusion == "preserved");
        REQUIRE(rep.mean_verdict.member);
        REQUIRE(rep.notes.find("no amplification") != std::string::npos);
    }

    SECTION("contract") {
        REQUIRE_THROWS_AS(schmidt_amplify(f, 0, 0.1), std::invalid_argument);
    }
}

TEST_CASE("verify_intermediate_cone sandwiches every cone between S_1 and PPT") {
    const auto f = fam(MeanFamily::WeightedGeometric, 0.5);

    SECTION("two qubits") {
        const TheoremReport rep = verify_intermediate_cone(f, 0.1, 2, 2);
        REQUIRE(rep.theorem == "main3");
        REQUIRE(rep.conclusion == "violated");
        REQUIRE(rep.notes.find("S_1") != std::string::npos);
    }

    SECTION("3x4 after lifting, same negativity") {
        const TheoremReport rep = verify_intermediate_cone(f, 0.1, 3, 4);
        REQUIRE(rep.m == 3);
        REQUIRE(rep.n == 4);
        REQUIRE(rep.conclusion == "violated");
        REQUIRE_THAT(rep.lambda3_numeric,
                     Catch::Matchers::WithinAbs(-0.0033426396982825271964, 1e-10));
    }

    SECTION("arithmetic is preserved") {
        const TheoremReport rep =
            verify_intermediate_cone(fam(MeanFamily::WeightedArithmetic, 0.25), 0.1, 3, 4);
        REQUIRE(rep.conclusion == "preserved");
        REQUIRE(rep.notes.find("convex") != std::string::npos);
    }
}
