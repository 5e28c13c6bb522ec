#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "dimcert/assembly.hpp"
#include "dimcert/parallel.hpp"
#include "dimcert/systems.hpp"

using namespace dimcert;

namespace {

SystemSpec halving_map() { return similitude_system({0.5}, {Vec{0, 0}}); }

ErrorBudget tiny_budget(double err = 1e-3) {
    ErrorBudget b;
    b.C_BH = 7.35;
    b.C1 = 1.0;
    b.C2 = 1.0;
    b.eta = 9.0;
    b.err_max = err;
    b.t_upper_used = 1.2;
    return b;
}

} // namespace

TEST_CASE("one similitude: every column sums to (1 +/- err)/2 at t=1") {
    SystemSpec spec = halving_map();
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.2, 0.1);
    ErrorBudget b = tiny_budget();
    TransferMatrices tm = assemble(spec, mesh, 1.0, b);

    ColumnStats sa = column_stats(tm.A);
    ColumnStats sb = column_stats(tm.B);
    double lo = 0.5 * (1 - b.err_max) * (1 - 1e-12);
    double hi = 0.5 * (1 + b.err_max) * (1 + 1e-12);
    CHECK(sa.min_col_sum == doctest::Approx(lo).epsilon(1e-12));
    CHECK(sa.max_col_sum == doctest::Approx(lo).epsilon(1e-12));
    CHECK(sb.min_col_sum == doctest::Approx(hi).epsilon(1e-12));
}

TEST_CASE("A and B share sparsity and differ by the exact scalar") {
    SystemSpec spec = similitude_system({0.4, 0.3}, {Vec{0.5, 0}, Vec{-0.5, 0}});
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.15, 0.1);
    ErrorBudget b = tiny_budget(0.02);
    TransferMatrices tm = assemble(spec, mesh, 0.9, b);
    REQUIRE(tm.A.nnz() == tm.B.nnz());
    double factor = (1 + b.err_max) * (1 + 1e-12) / ((1 - b.err_max) * (1 - 1e-12));
    for (int64_t j = 0; j < std::min<int64_t>(tm.A.size, 50); ++j)
        for (int64_t k = (*tm.A.colptr)[static_cast<size_t>(j)];
             k < (*tm.A.colptr)[static_cast<size_t>(j) + 1]; ++k) {
            int32_t i = (*tm.A.rows)[static_cast<size_t>(k)];
            double va = tm.A.value(i, j);
            CHECK(va >= 0.0);
            CHECK(tm.B.value(i, j) == doctest::Approx(va * factor).epsilon(1e-12));
        }
}

TEST_CASE("operator consistency: action equals the collocation sum") {
    SystemSpec spec = similitude_system({0.45, 0.25}, {Vec{0.5, 0.1}, Vec{-0.5, -0.2}});
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.2, 0.1);
    ErrorBudget b = tiny_budget(0.0005);
    double t = 1.13;
    TransferMatrices tm = assemble(spec, mesh, t, b);

    // smooth positive nodal function
    std::vector<double> g(static_cast<size_t>(mesh.node_count()));
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        const Vec& p = mesh.nodes[static_cast<size_t>(i)];
        g[static_cast<size_t>(i)] = 1.0 + 0.3 * p[0] + 0.2 * p[1] * p[1];
    }
    std::vector<double> y(g.size());
    transfer_apply(tm.A, g, y);
    for (int64_t j = 0; j < mesh.node_count(); j += 7) {
        const Vec& x = mesh.nodes[static_cast<size_t>(j)];
        double direct = 0.0;
        for (const auto& f : spec.alphabet.maps) {
            Vec im = apply(f, x);
            BarycentricLocation loc = locate(mesh, im, f.target_vertex);
            direct += std::exp(t * std::log(derivative_norm(f, x))) * interpolate(mesh, g, loc);
        }
        double expect = direct * (1 - b.err_max) * (1 - 1e-12);
        CHECK(y[static_cast<size_t>(j)] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("assembly is bitwise deterministic across worker counts and cache") {
    SystemSpec spec = similitude_system({0.5, 0.3, 0.2},
                                        {Vec{0.5, 0}, Vec{-0.4, 0.4}, Vec{-0.3, -0.5}});
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.08), 0.1, 0.08);
    ErrorBudget b = tiny_budget();

    set_worker_count(1);
    TransferMatrices t1 = assemble(spec, mesh, 1.07, b);
    set_worker_count(4);
    TransferMatrices t4 = assemble(spec, mesh, 1.07, b);
    auto cache = build_assembly_cache(spec, mesh);
    REQUIRE(cache.has_value());
    TransferMatrices tc = assemble(spec, mesh, 1.07, b, &*cache);
    set_worker_count(0);

    REQUIRE(t1.A.nnz() == t4.A.nnz());
    REQUIRE(t1.A.nnz() == tc.A.nnz());
    for (size_t k = 0; k < t1.A.vals->size(); ++k) {
        CHECK((*t1.A.vals)[k] == (*t4.A.vals)[k]);
        CHECK((*t1.A.rows)[k] == (*t4.A.rows)[k]);
        CHECK((*t1.A.vals)[k] == (*tc.A.vals)[k]);
    }
}

TEST_CASE("tail correction bumps one row of B only") {
    SystemSpec spec = halving_map();
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.3, 0.1);
    TransferMatrices tm = assemble(spec, mesh, 1.0, tiny_budget());

    TailBound tb;
    tb.C0 = 0.0;
    tb.anchor_node = 0;
    TransferMatrices same = apply_tail_correction(tm, tb);
    CHECK(!same.B.has_bump());

    tb.C0 = 0.125;
    TransferMatrices bumped = apply_tail_correction(tm, tb);
    CHECK(bumped.B.value(0, 1) == doctest::Approx(tm.B.value(0, 1) + 0.125));
    CHECK(bumped.B.value(0, 0) == doctest::Approx(tm.B.value(0, 0) + 0.125));
    CHECK(bumped.A.value(0, 0) == doctest::Approx(tm.A.value(0, 0)));
    // entrywise A <= B survives the correction
    for (int64_t j = 0; j < std::min<int64_t>(bumped.A.size, 30); ++j)
        for (int64_t i = 0; i < std::min<int64_t>(bumped.A.size, 30); ++i)
            CHECK(bumped.A.value(i, j) <= bumped.B.value(i, j) + 1e-15);
}

TEST_CASE("nnz per column bounded by alphabet size times simplex nodes") {
    SystemSpec spec = similitude_system({0.4, 0.3}, {Vec{0.5, 0}, Vec{-0.5, 0}});
    Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.2, 0.1);
    TransferMatrices tm = assemble(spec, mesh, 1.0, tiny_budget());
    for (int64_t j = 0; j < tm.A.size; ++j) {
        int64_t cnt = (*tm.A.colptr)[static_cast<size_t>(j) + 1] -
                      (*tm.A.colptr)[static_cast<size_t>(j)];
        CHECK(cnt <= 3 * 2);
        CHECK(cnt >= 1);
    }
}
