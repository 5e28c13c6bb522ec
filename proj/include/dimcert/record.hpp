#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dimcert/dim_solver.hpp"
#include "dimcert/systems.hpp"

namespace dimcert {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string system;
    double mesh_h = 0.05;
    double delta = 0.0;       ///< 0 = min(0.5 eta, 2 mesh_h)
    double truncation = 0.0;  ///< 0 = catalog default
    double width_goal = 0.0;  ///< 0 = 4x the err-implied floor
    double tol_spectral = 1e-8;
    uint64_t seed = 12345;
    int jobs = 0;
    int validate_samples = 200;
    int figure_depth = -1;
    std::string figure_path;
    std::string out_path;
    double t_init_lo = 0.0, t_init_hi = 0.0; ///< 0 = catalog hint
};

/// Self-contained run outcome: the certified interval, every constant that
/// went into it, the evaluation trace and the two eigenvector witnesses, so
/// the bounds can be re-checked from the file alone.
struct ResultRecord {
    std::string version = kVersion;
    RunConfig config;
    std::string system_name;
    int n = 2;
    int64_t map_count = 0;
    double eta = 0.0;
    double delta = 0.0;
    double h_max = 0.0;
    int64_t nodes = 0;
    int64_t simplex_count = 0;
    uint64_t mesh_fp = 0;
    double delta_used = 0.0;
    ErrorBudget budget;
    std::vector<ConstantAudit> audit;
    bool has_tail = false;
    double truncation = 0.0;
    double tail_C0_lo = 0.0; ///< C0 at t_lo (0 when no tail)
    double tail_C0_hi = 0.0; ///< C0 at t_hi
    int64_t anchor_node = -1;
    bool validation_pass = false;
    std::vector<CheckResult> validation;
    CertifiedInterval interval;
};

/// validate -> mesh -> constants -> bracket, with the width-goal default and
/// catalog hints resolved here. Throws ConfigError for unknown systems and
/// propagates certification failures (ErrTooLarge, BracketFailure).
ResultRecord run(const RunConfig& config);

void write_record(const ResultRecord& rec, const std::string& path);
ResultRecord read_record(const std::string& path);

/// Re-assembles the two endpoint matrices and re-applies the radius
/// certificates with the stored witnesses. Returns false if either
/// certification inequality fails; PositivityError on a non-positive witness;
/// VerificationFailure on structural mismatch (unknown system, fingerprint).
bool verify_record(const std::string& path);

/// Shared by run() and verify_record: system + mesh + budget + tail setup.
struct PipelineParts {
    SystemSpec spec;
    Mesh mesh;
    ErrorBudget budget;
    std::vector<ConstantAudit> audit;
    double delta = 0.0;
    int64_t anchor_node = -1;
    double t_cap = 0.0;
};
PipelineParts build_pipeline(const RunConfig& config);

/// Truncation bound at parameter t for infinite alphabets (already inflated
/// by the (1+err) factor the upper matrix carries).
TailBound tail_bound_at(const SystemSpec& spec, const ErrorBudget& budget, int64_t anchor,
                        double t);

} // namespace dimcert
