#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dimcert/constants.hpp"
#include "dimcert/gdms.hpp"
#include "dimcert/mesh.hpp"
#include "dimcert/sparse.hpp"

namespace dimcert {

/// Truncation remainder folded into the upper matrix: entry (anchor_node, j)
/// of B gains C_0 for every column j.
struct TailBound {
    TailDescriptor kind;
    double C0 = 0.0;
    int64_t anchor_node = 0;
    double truncation_parameter = 0.0;
};

struct TransferMatrices {
    SparseMatrix A; ///< deflated by (1-err)(1-eps_fp)
    SparseMatrix B; ///< inflated by (1+err)(1+eps_fp); tail lands here
    double t = 0.0;
    double err = 0.0;
    std::optional<TailBound> tail;
    std::string system_name;
    uint64_t mesh_fingerprint = 0;
};

/// Everything about one (system, mesh) pair that does not depend on t: per
/// node and per alphabet map, the log derivative norm and the barycentric
/// weights of the image. A new t then costs one exponentiation sweep. Exact,
/// not approximate; only built when it fits the entry cap.
struct AssemblyCache {
    int n = 2;
    int64_t ncols = 0;
    std::vector<int64_t> col_ptr;   ///< per column: start into the entry arrays
    std::vector<double> logd;       ///< per entry
    std::vector<int32_t> entry_rows;   ///< (n+1) per entry
    std::vector<double> entry_lambda;  ///< (n+1) per entry
    int64_t entries() const { return static_cast<int64_t>(logd.size()); }
};

struct AssemblyOptions {
    double fp_slack = 1e-12;
    int64_t cache_entry_cap = 60'000'000;
};

/// Precomputes image locations for all (node, map) pairs, or returns nothing
/// if the pair count exceeds the cap (assemble then recomputes on the fly).
std::optional<AssemblyCache> build_assembly_cache(const SystemSpec& spec, const Mesh& mesh,
                                                  const AssemblyOptions& opt = {});

/// Assembles the bracketing pair at parameter t. Column j collects, over the
/// maps rooted at node j's vertex, the weight |Dphi_e(x_j)|^t times the
/// barycentric coordinates of phi_e(x_j); accumulation follows the fixed
/// alphabet order, so the result is bitwise reproducible for any worker count.
TransferMatrices assemble(const SystemSpec& spec, const Mesh& mesh, double t,
                          const ErrorBudget& budget, const AssemblyCache* cache = nullptr,
                          const AssemblyOptions& opt = {});

/// Adds the truncation remainder to B; A is untouched.
TransferMatrices apply_tail_correction(TransferMatrices tm, const TailBound& tail);

uint64_t mesh_fingerprint(const Mesh& mesh);

/// Node of the given vertex region closest to the region center; default
/// anchor for tail corrections.
int64_t anchor_node_for_vertex(const Mesh& mesh, const Region& region, int vertex);

} // namespace dimcert
