#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dimcert/errors.hpp"

namespace dimcert {

/// Non-negative sparse matrix in compressed-column storage. Column j holds the
/// weights feeding component j of the collocation action
///     act(M, w)_j = scale * sum_k vals[k] * w[rows[k]]   (k over column j),
/// so a column is one node's assembled sum and the product is a race-free
/// gather. The A/B pair of one assembly shares structure and raw values and
/// differs only in `scale`; a truncation correction adds `bump_value * w[bump_row]`
/// to every component (a dense row in matrix terms, kept implicit).
struct SparseMatrix {
    int64_t size = 0;
    std::shared_ptr<std::vector<int64_t>> colptr;
    std::shared_ptr<std::vector<int32_t>> rows;
    std::shared_ptr<std::vector<double>> vals;
    double scale = 1.0;
    int64_t bump_row = -1;
    double bump_value = 0.0;

    int64_t nnz() const { return rows ? static_cast<int64_t>(rows->size()) : 0; }
    bool has_bump() const { return bump_row >= 0 && bump_value != 0.0; }

    /// Effective entry (i, j) including scale and bump; for tests and dumps.
    double value(int64_t i, int64_t j) const;

    static SparseMatrix from_triplets(int64_t n,
                                      const std::vector<std::tuple<int32_t, int32_t, double>>& t);
    /// Builds the matrix whose collocation action equals the usual row-times-
    /// vector product of the given dense rows; test convenience.
    static SparseMatrix from_dense_action(const std::vector<std::vector<double>>& rows);
};

/// y = act(M, w); y must be pre-sized. Deterministic for any worker count.
void transfer_apply(const SparseMatrix& m, const std::vector<double>& w, std::vector<double>& y);

struct ColumnStats {
    double min_col_sum = 0.0;
    double max_col_sum = 0.0;
    int64_t nnz = 0;
    double fill = 0.0;
};

ColumnStats column_stats(const SparseMatrix& m);

/// Coordinate text dump "row col value" with 17 significant digits; exact
/// round-trip. Bump rows are materialized into the dump.
void dump_matrix(const SparseMatrix& m, const std::string& path);
SparseMatrix load_matrix(const std::string& path);

} // namespace dimcert
