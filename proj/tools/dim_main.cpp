#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dimcert/errors.hpp"
#include "dimcert/figure.hpp"
#include "dimcert/parallel.hpp"
#include "dimcert/record.hpp"
#include "dimcert/systems.hpp"

namespace {

// flat "key = value" config with one [section] per concern
dimcert::RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dimcert::ConfigError("cannot open config file " + path);
    dimcert::RunConfig cfg;
    std::string line, section;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto l = line.find_first_not_of(" \t");
        if (l == std::string::npos) continue;
        auto r = line.find_last_not_of(" \t\r");
        line = line.substr(l, r - l + 1);
        if (line.front() == '[') {
            section = line.substr(1, line.find(']') - 1);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) throw dimcert::ConfigError("bad config line: " + line);
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
        };
        key = (section.empty() ? "" : section + ".") + trim(key);
        val = trim(val);
        if (key == "run.system" || key == "system") cfg.system = val;
        else if (key == "run.mesh_h" || key == "mesh_h") cfg.mesh_h = std::stod(val);
        else if (key == "run.delta" || key == "delta") cfg.delta = std::stod(val);
        else if (key == "run.truncation" || key == "truncation") cfg.truncation = std::stod(val);
        else if (key == "run.width_goal" || key == "width_goal") cfg.width_goal = std::stod(val);
        else if (key == "spectral.tol" || key == "tol_spectral") cfg.tol_spectral = std::stod(val);
        else if (key == "run.seed" || key == "seed") cfg.seed = std::stoull(val);
        else if (key == "run.jobs" || key == "jobs") cfg.jobs = std::stoi(val);
        else if (key == "run.validate_samples" || key == "validate_samples")
            cfg.validate_samples = std::stoi(val);
        else if (key == "output.record" || key == "out") cfg.out_path = val;
        else if (key == "output.figure" || key == "figure") cfg.figure_path = val;
        else if (key == "output.figure_depth" || key == "figure_depth")
            cfg.figure_depth = std::stoi(val);
        else throw dimcert::ConfigError("unknown config key: " + key);
    }
    return cfg;
}

void print_summary(const dimcert::ResultRecord& rec) {
    std::printf("system        %s  (n=%d, %lld maps%s)\n", rec.system_name.c_str(), rec.n,
                static_cast<long long>(rec.map_count),
                rec.has_tail ? ", truncated infinite alphabet" : "");
    std::printf("mesh          h_max=%.6g  nodes=%lld  simplices=%lld\n", rec.h_max,
                static_cast<long long>(rec.nodes), static_cast<long long>(rec.simplex_count));
    std::printf("budget        C1=%.6g C2=%.6g C_BH=%.6g eta=%.6g err=%.6g\n", rec.budget.C1,
                rec.budget.C2, rec.budget.C_BH, rec.budget.eta, rec.budget.err_max);
    if (rec.has_tail)
        std::printf("tail          R/N=%.6g  C0(t_hi)=%.6g  anchor=%lld\n", rec.truncation,
                    rec.tail_C0_hi, static_cast<long long>(rec.anchor_node));
    std::printf("validation    %s\n", rec.validation_pass ? "all checks pass" : "SOME CHECKS FAILED");
    std::printf("certified     dim in [%.12g, %.12g]  width=%.6g%s\n", rec.interval.t_lo,
                rec.interval.t_hi, rec.interval.t_hi - rec.interval.t_lo,
                rec.interval.mesh_limited ? "  (mesh-limited)" : "");
    std::printf("evidence      r(A_lo) >= %.12g   r(B_hi) <= %.12g\n", rec.interval.evidence_lo.lo,
                rec.interval.evidence_hi.hi);
    std::printf("wall time     %.1f s, %zu evaluations\n", rec.interval.wall_time_s,
                rec.interval.trace.size());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified Hausdorff dimension bounds for conformal graph-directed systems"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "run the certification pipeline");
    dimcert::RunConfig cfg;
    std::string config_path;
    run_cmd->add_option("--system", cfg.system, "catalog system name");
    run_cmd->add_option("--h", cfg.mesh_h, "target mesh diameter");
    run_cmd->add_option("--truncation", cfg.truncation, "alphabet truncation (R or N)");
    run_cmd->add_option("--width-goal", cfg.width_goal, "target certified width");
    run_cmd->add_option("--delta", cfg.delta, "mesh margin (default min(eta/2, 2h))");
    run_cmd->add_option("--tol", cfg.tol_spectral, "spectral spread tolerance");
    run_cmd->add_option("--seed", cfg.seed, "sampling seed");
    run_cmd->add_option("--out", cfg.out_path, "record output path");
    run_cmd->add_option("--figure", cfg.figure_depth, "emit an SVG with this iteration depth");
    run_cmd->add_option("--figure-path", cfg.figure_path, "figure output path");
    run_cmd->add_option("--jobs", cfg.jobs, "worker cap");
    run_cmd->add_option("--config", config_path, "key = value config file");

    auto* verify_cmd = app.add_subcommand("verify", "re-check a result record");
    std::string record_path;
    verify_cmd->add_option("record", record_path, "record file")->required();

    auto* catalog_cmd = app.add_subcommand("catalog", "list built-in systems");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (catalog_cmd->parsed()) {
            for (const auto& e : dimcert::catalog())
                std::printf("%-18s n=%d  eta=%.6g  reported %.9g +/- %.2g\n", e.name.c_str(), e.n,
                            e.eta, e.table_interval.first, e.table_interval.second);
            return 0;
        }
        if (verify_cmd->parsed()) {
            bool ok = dimcert::verify_record(record_path);
            std::printf("%s\n", ok ? "record verifies: certified inequalities hold"
                                   : "record FAILED verification");
            return ok ? 0 : 2;
        }
        if (!config_path.empty()) {
            dimcert::RunConfig file_cfg = parse_config_file(config_path);
            if (cfg.system.empty()) cfg = file_cfg;
        }
        if (cfg.system.empty()) {
            std::fprintf(stderr, "error: --system required; available systems:\n");
            for (const auto& e : dimcert::catalog()) std::fprintf(stderr, "  %s\n", e.name.c_str());
            return 3;
        }
        dimcert::ResultRecord rec = dimcert::run(cfg);
        print_summary(rec);
        if (cfg.figure_depth >= 0) {
            std::string fp = cfg.figure_path.empty() ? (rec.system_name + ".svg") : cfg.figure_path;
            const auto* entry = dimcert::find_catalog(cfg.system);
            dimcert::SystemSpec spec = entry->build(
                cfg.truncation > 0 ? cfg.truncation
                                   : std::min(entry->default_truncation, 40.0));
            dimcert::emit_figure(spec, cfg.figure_depth, fp);
            std::printf("figure        %s\n", fp.c_str());
        }
        return 0;
    } catch (const dimcert::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        std::fprintf(stderr, "available systems:\n");
        for (const auto& en : dimcert::catalog()) std::fprintf(stderr, "  %s\n", en.name.c_str());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "certification failure: %s\n", e.what());
        return 2;
    }
}
