#pragma once

// JSON and CSV encodings for matrices, bipartite operators, channels, cone
// verdicts, and theorem/scan reports. JSON numbers round-trip exactly; CSV
// prints 17 significant digits so both carry the same values.

#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "conerig/bipartite.hpp"
#include "conerig/choi.hpp"
#include "conerig/cones.hpp"
#include "conerig/matrix.hpp"
#include "conerig/rigidity.hpp"

namespace conerig {

using json = nlohmann::json;

inline std::string format_g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json matrix_to_json(const Matrix& x) {
    json entries = json::array();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < x.cols(); ++j)
            row.push_back({x(i, j).real(), x(i, j).imag()});
        entries.push_back(std::move(row));
    }
    return {{"m", x.rows()}, {"n", x.cols()}, {"entries", std::move(entries)}};
}

namespace detail {

inline Matrix entries_from_json(const json& j, std::size_t rows, std::size_t cols,
                                const char* who) {
    const auto& entries = j.at("entries");
    if (!entries.is_array() || entries.size() != rows)
        throw std::invalid_argument(std::string(who) + ": \"entries\" must be an array of " +
                                    std::to_string(rows) + " rows");
    Matrix x(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto& row = entries[i];
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument(std::string(who) + ": row " + std::to_string(i) +
                                        " must hold " + std::to_string(cols) + " entries");
        for (std::size_t jc = 0; jc < cols; ++jc) {
            const auto& e = row[jc];
            if (e.is_number()) {  // bare real accepted on input
                x(i, jc) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                x(i, jc) = Complex(e[0].get<double>(), e[1].get<double>());
            } else {
                throw std::invalid_argument(std::string(who) + ": entry (" + std::to_string(i) +
                                            "," + std::to_string(jc) +
                                            ") must be [re, im] or a real number");
            }
        }
    }
    return x;
}

}  // namespace detail

// {"m": rows, "n": cols, "entries": [[[re,im], ...], ...]}; square matrices
// are validated Hermitian to 1e-9 unless require_hermitian is false
inline Matrix matrix_from_json(const json& j, bool require_hermitian = true) {
    const std::size_t rows = j.at("m").get<std::size_t>(), cols = j.at("n").get<std::size_t>();
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("matrix_from_json: dimensions must be positive");
    Matrix x = detail::entries_from_json(j, rows, cols, "matrix_from_json");
    if (require_hermitian && rows == cols)
        x = HermitianMatrix(x, 1e-9).mat();
    return x;
}

// {"m": first factor, "n": second factor, "entries": (m*n)x(m*n) matrix}
inline json bipartite_to_json(const BipartiteOperator& x) {
    json j = matrix_to_json(x.mat);
    j["m"] = x.m;
    j["n"] = x.n;
    return j;
}

inline BipartiteOperator bipartite_from_json(const json& j) {
    const std::size_t m = j.at("m").get<std::size_t>(), n = j.at("n").get<std::size_t>();
    if (m == 0 || n == 0)
        throw std::invalid_argument("bipartite_from_json: factor dimensions must be positive");
    const Matrix x = detail::entries_from_json(j, m * n, m * n, "bipartite_from_json");
    return BipartiteOperator(m, n, x, 1e-9);
}

// {"kraus": [matrix, ...]} or {"choi": bipartite matrix json}
inline LinearMapOnMatrices channel_from_json(const json& j) {
    if (j.contains("kraus")) {
        const auto& arr = j.at("kraus");
        if (!arr.is_array() || arr.empty())
            throw std::invalid_argument("channel_from_json: \"kraus\" must be a non-empty array");
        std::vector<Matrix> kraus;
        for (const auto& kj : arr) kraus.push_back(matrix_from_json(kj, false));
        return kraus_to_map(kraus);
    }
    if (j.contains("choi")) return map_of_choi(ChoiMatrix(bipartite_from_json(j.at("choi"))));
    throw std::invalid_argument("channel_from_json: expected a \"kraus\" or \"choi\" field");
}

inline json verdict_to_json(const ConeVerdict& v) {
    return {{"member", v.member},
            {"certificate", certificate_name(v.certificate)},
            {"min_eig", v.min_eigenvalue},
            {"min_pt_eig", v.min_pt_eigenvalue},
            {"pt_spectrum", v.pt_spectrum},
            {"detail", v.detail}};
}

inline ConeVerdict verdict_from_json(const json& j) {
    ConeVerdict v;
    v.member = j.at("member").get<bool>();
    const std::string cert = j.at("certificate").get<std::string>();
    if (cert == "PTSpectrum") v.certificate = Certificate::PTSpectrum;
    else if (cert == "PeresHorodecki") v.certificate = Certificate::PeresHorodecki;
    else if (cert == "StructuralLemma") v.certificate = Certificate::StructuralLemma;
    else v.certificate = Certificate::Unknown;
    v.min_eigenvalue = j.value("min_eig", 0.0);
    v.min_pt_eigenvalue = j.value("min_pt_eig", 0.0);
    if (j.contains("pt_spectrum")) v.pt_spectrum = j.at("pt_spectrum").get<std::vector<double>>();
    v.detail = j.value("detail", std::string{});
    return v;
}

inline json report_to_json(const TheoremReport& rep) {
    json inputs = json::array();
    for (const auto& v : rep.input_verdicts) inputs.push_back(verdict_to_json(v));
    json metrics = json::object();
    for (const auto& [name, val] : rep.metrics) metrics[name] = val;
    json j = {{"theorem", rep.theorem},
              {"mean", rep.mean_spec},
              {"epsilon", rep.epsilon},
              {"inputs", std::move(inputs)},
              {"mean_verdict", verdict_to_json(rep.mean_verdict)},
              {"lambda3", {{"exact", rep.lambda3_exact}, {"numeric", rep.lambda3_numeric}}},
              {"kappa", rep.kappa},
              {"conclusion", rep.conclusion},
              {"c", rep.c},
              {"dims", {rep.m, rep.n}},
              {"r", rep.r},
              {"metrics", std::move(metrics)},
              {"notes", rep.notes}};
    if (rep.has_fitted) j["fitted"] = rep.fitted;
    return j;
}

inline TheoremReport report_from_json(const json& j) {
    TheoremReport rep;
    rep.theorem = j.at("theorem").get<std::string>();
    rep.mean_spec = j.at("mean").get<std::string>();
    rep.epsilon = j.at("epsilon").get<double>();
    for (const auto& vj : j.at("inputs")) rep.input_verdicts.push_back(verdict_from_json(vj));
    rep.mean_verdict = verdict_from_json(j.at("mean_verdict"));
    rep.lambda3_exact = j.at("lambda3").at("exact").get<double>();
    rep.lambda3_numeric = j.at("lambda3").at("numeric").get<double>();
    rep.kappa = j.at("kappa").get<double>();
    rep.conclusion = j.at("conclusion").get<std::string>();
    rep.c = j.value("c", 0.0);
    if (j.contains("dims")) {
        rep.m = j.at("dims")[0].get<std::size_t>();
        rep.n = j.at("dims")[1].get<std::size_t>();
    }
    rep.r = j.value("r", std::size_t{0});
    if (j.contains("metrics"))
        for (const auto& [key, val] : j.at("metrics").items())
            rep.metrics.emplace_back(key, val.get<double>());
    if (j.contains("fitted")) {
        rep.fitted = j.at("fitted").get<double>();
        rep.has_fitted = true;
    }
    rep.notes = j.value("notes", std::string{});
    return rep;
}

inline json scan_to_json(const Lambda3Report& rep, const std::string& mean_spec) {
    json points = json::array();
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i)
        points.push_back({{"epsilon", rep.epsilons[i]},
                          {"lambda3_exact", rep.lambda3_exact[i]},
                          {"lambda3_numeric", rep.lambda3_numeric[i]}});
    return {{"mean", mean_spec},
            {"points", std::move(points)},
            {"fitted", rep.fitted_coefficient},
            {"predicted", rep.predicted}};
}

inline std::string scan_to_csv(const Lambda3Report& rep) {
    std::string out = "epsilon,lambda3_exact,lambda3_numeric,fitted,predicted\n";
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
        out += format_g17(rep.epsilons[i]);
        out += ',';
        out += format_g17(rep.lambda3_exact[i]);
        out += ',';
        out += format_g17(rep.lambda3_numeric[i]);
        out += ',';
        out += format_g17(rep.fitted_coefficient);
        out += ',';
        out += format_g17(rep.predicted);
        out += '\n';
    }
    return out;
}

}  // namespace conerig
