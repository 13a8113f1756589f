// conerig: operator-mean cone rigidity toolkit.
//
// Subcommands compute Kubo-Ando means of positive definite matrices and
// reproduce the cone ejection phenomena: curvature tables, the two-qubit
// rigidity pair and its lambda3 scan, lifts to higher dimensions, Schmidt
// number amplification, intermediate-cone sandwiches, and channel means.
//
// Exit codes: 0 success and all verdicts conclusive, 1 contract/parse error,
// 2 inconclusive or failed verification.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conerig/experiment.hpp"

namespace {

using conerig::json;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    return json::parse(in);
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::invalid_argument("cannot write file: " + out_path);
    out << text;
}

std::string report_record_to_csv(const json& rec) {
    const json& res = rec.at("results");
    std::string out = "key,value\n";
    auto kv = [&out](const std::string& k, const std::string& v) {
        out += k;
        out += ',';
        out += v;
        out += '\n';
    };
    kv("theorem", res.at("theorem").get<std::string>());
    kv("mean", res.at("mean").get<std::string>());
    kv("epsilon", conerig::format_g17(res.at("epsilon").get<double>()));
    kv("lambda3_exact", conerig::format_g17(res.at("lambda3").at("exact").get<double>()));
    kv("lambda3_numeric", conerig::format_g17(res.at("lambda3").at("numeric").get<double>()));
    kv("kappa", conerig::format_g17(res.at("kappa").get<double>()));
    kv("conclusion", res.at("conclusion").get<std::string>());
    for (const auto& [key, val] : res.at("metrics").items())
        kv("metric:" + key, conerig::format_g17(val.get<double>()));
    return out;
}

std::string scan_record_to_csv(const json& rec) {
    const json& res = rec.at("results");
    std::string out = "epsilon,lambda3_exact,lambda3_numeric,fitted,predicted\n";
    for (const auto& p : res.at("points")) {
        out += conerig::format_g17(p.at("epsilon").get<double>());
        out += ',';
        out += conerig::format_g17(p.at("lambda3_exact").get<double>());
        out += ',';
        out += conerig::format_g17(p.at("lambda3_numeric").get<double>());
        out += ',';
        out += conerig::format_g17(res.at("fitted").get<double>());
        out += ',';
        out += conerig::format_g17(res.at("predicted").get<double>());
        out += '\n';
    }
    return out;
}

std::string matrix_record_to_csv(const json& rec) {
    const json& entries = rec.at("results").at("result").at("entries");
    std::string out;
    for (const auto& row : entries) {
        bool first = true;
        for (const auto& e : row) {
            if (!first) out += ',';
            first = false;
            out += conerig::format_g17(e[0].get<double>());
            out += ',';
            out += conerig::format_g17(e[1].get<double>());
        }
        out += '\n';
    }
    return out;
}

int conclusion_exit_code(const json& results) {
    if (results.contains("conclusion") &&
        results.at("conclusion").get<std::string>() == "inconclusive")
        return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace conerig;

    if (const char* tol_env = std::getenv("CONE_TOL")) {
        char* end = nullptr;
        const double tol = std::strtod(tol_env, &end);
        if (end == tol_env || *end != '\0' || !(tol > 0.0)) {
            std::cerr << "conerig: CONE_TOL must be a positive real, got \"" << tol_env
                      << "\"\n";
            return 1;
        }
        cone_tolerance_base() = tol;
    }

    CLI::App app{"operator mean cone rigidity toolkit"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string out_path, format = "json", dims = "3x3";
    std::vector<std::string> mean_flags;
    std::vector<std::string> operand_paths;

    auto add_common = [&](CLI::App* sub, bool multi_mean = false) {
        if (multi_mean)
            sub->add_option("--mean", mean_flags, "mean specifier <family>:<alpha>, repeatable");
        else
            sub->add_option("--mean", mean_flags, "mean specifier <family>:<alpha>")
                ->expected(1);
        sub->add_option("--eps", cfg.eps_grid, "epsilon grid, strictly descending in (0,1)")
            ->delimiter(',');
        sub->add_option("--dims", dims, "target dimensions MxN");
        sub->add_option("--r", cfg.r, "Schmidt amplification factor");
        sub->add_option("--c", cfg.c, "interior shift coefficient (shift = c*eps^2)");
        sub->add_option("--seed", cfg.seed, "seed for randomized property suites");
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    CLI::App* cmd_curvature = app.add_subcommand(
        "curvature", "curvature table: numeric kappa vs tabulated reference");
    add_common(cmd_curvature, true);

    CLI::App* cmd_mean =
        app.add_subcommand("mean", "Kubo-Ando mean of two positive definite matrices");
    add_common(cmd_mean);
    cmd_mean->add_option("a", operand_paths, "matrix JSON operands")->expected(2);

    CLI::App* cmd_scan = app.add_subcommand(
        "rigidity-scan", "lambda3 over an epsilon grid with curvature fit");
    add_common(cmd_scan);

    CLI::App* cmd_lift =
        app.add_subcommand("lift", "lift the two-qubit counterexample to MxN");
    add_common(cmd_lift);

    CLI::App* cmd_amplify = app.add_subcommand(
        "schmidt-amplify", "amplify the Schmidt number gap by tensoring with P_r");
    add_common(cmd_amplify);

    CLI::App* cmd_sandwich = app.add_subcommand(
        "cone-sandwich", "violation for every cone between separable and PPT");
    add_common(cmd_sandwich);

    CLI::App* cmd_channel = app.add_subcommand(
        "channel-mean", "normalized channel mean; no operands runs the built-in pair");
    add_common(cmd_channel);
    cmd_channel->add_option("channels", operand_paths, "channel JSON operands (kraus or choi)")
        ->expected(0, 2);

    CLI::App* cmd_verify =
        app.add_subcommand("verify-all", "run every theorem driver across the mean families");
    add_common(cmd_verify);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!mean_flags.empty()) cfg.mean_specs = mean_flags;
        if (cmd_curvature->parsed() && mean_flags.empty()) {
            cfg.mean_specs.clear();
            for (const char* fam : {"arithmetic", "geometric", "harmonic", "log", "duallog"})
                for (const char* al : {"0", "0.25", "0.5", "0.75", "1"})
                    cfg.mean_specs.push_back(std::string(fam) + ":" + al);
        }
        {
            std::size_t sep = dims.find('x');
            if (sep == std::string::npos) sep = dims.find('X');
            if (sep == std::string::npos || sep == 0 || sep + 1 >= dims.size())
                throw std::invalid_argument("--dims expects MxN, got \"" + dims + "\"");
            cfg.m = std::stoul(dims.substr(0, sep));
            cfg.n = std::stoul(dims.substr(sep + 1));
        }

        const auto started = std::chrono::steady_clock::now();
        json results;
        std::string csv;

        if (cmd_curvature->parsed()) {
            cfg.command = "curvature";
            results = run_curvature(cfg);
            csv = curvature_to_csv(results);
        } else if (cmd_mean->parsed()) {
            cfg.command = "mean";
            cfg.inputs = operand_paths;
            const Matrix a = matrix_from_json(read_json_file(operand_paths[0]));
            const Matrix b = matrix_from_json(read_json_file(operand_paths[1]));
            const RepresentingFunction f = cfg.primary_mean();
            results = {{"mean", mean_spec_string(f)}, {"result", matrix_to_json(mean(f, a, b))}};
        } else if (cmd_scan->parsed()) {
            cfg.command = "rigidity-scan";
            results = run_rigidity_scan(cfg);
        } else if (cmd_lift->parsed()) {
            cfg.command = "lift";
            results = run_lift(cfg);
        } else if (cmd_amplify->parsed()) {
            cfg.command = "schmidt-amplify";
            results = run_schmidt_amplify(cfg);
        } else if (cmd_sandwich->parsed()) {
            cfg.command = "cone-sandwich";
            results = run_cone_sandwich(cfg);
        } else if (cmd_channel->parsed()) {
            cfg.command = "channel-mean";
            cfg.inputs = operand_paths;
            std::vector<json> docs;
            for (const auto& path : operand_paths) docs.push_back(read_json_file(path));
            results = run_channel_mean(cfg, docs);
        } else if (cmd_verify->parsed()) {
            cfg.command = "verify-all";
            results = run_verify_all(cfg);
        }

        const double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                      started)
                .count();
        const json record = make_run_record(cfg, results, wall_ms);

        if (cmd_verify->parsed()) {
            for (const auto& line : results.at("lines")) {
                std::printf("[%s] %-34s %-18s expected=%s got=%s\n",
                            line.at("pass").get<bool>() ? "PASS" : "FAIL",
                            line.at("theorem").get<std::string>().c_str(),
                            line.at("mean").get<std::string>().c_str(),
                            line.at("expected").get<std::string>().c_str(),
                            line.at("conclusion").get<std::string>().c_str());
            }
            if (!out_path.empty()) emit(record.dump(2) + "\n", out_path);
            if (!results.at("all_pass").get<bool>()) return 2;
            return 0;
        }

        if (format == "csv") {
            if (cmd_scan->parsed()) csv = scan_record_to_csv(record);
            else if (cmd_mean->parsed()) csv = matrix_record_to_csv(record);
            else if (!cmd_curvature->parsed()) csv = report_record_to_csv(record);
            emit(csv, out_path);
        } else {
            emit(record.dump(2) + "\n", out_path);
        }
        return conclusion_exit_code(results);
    } catch (const std::invalid_argument& e) {
        std::cerr << "conerig: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "conerig: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "conerig: " << e.what() << "\n";
        return 1;
    }
}
