#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "dimcert/spectral.hpp"

using namespace dimcert;

namespace {

// dense oracle: largest |eigenvalue| via the full spectrum
double dense_radius(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    double r = 0.0;
    for (int i = 0; i < n; ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
    return r;
}

} // namespace

TEST_CASE("certify_bounds: hand examples") {
    auto m1 = SparseMatrix::from_dense_action({{2, 1}, {1, 2}});
    CertifiedRadius c1 = certify_bounds(m1, {1.0, 1.0});
    CHECK(c1.lo == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(c1.hi == doctest::Approx(3.0).epsilon(1e-11));

    auto m2 = SparseMatrix::from_dense_action({{1, 2}, {3, 4}});
    CertifiedRadius c2 = certify_bounds(m2, {1.0, 1.0});
    CHECK(c2.lo == doctest::Approx(3.0).epsilon(1e-11));
    CHECK(c2.hi == doctest::Approx(7.0).epsilon(1e-11));
    double exact = 0.5 * (5.0 + std::sqrt(33.0));
    CHECK(c2.lo <= exact);
    CHECK(exact <= c2.hi);

    auto m3 = SparseMatrix::from_dense_action({{5.0}});
    CertifiedRadius c3 = certify_bounds(m3, {0.37});
    CHECK(c3.lo == doctest::Approx(5.0).epsilon(1e-11));
    CHECK(c3.hi == doctest::Approx(5.0).epsilon(1e-11));

    CHECK_THROWS_AS(certify_bounds(m1, {1.0, -1.0}), PositivityError);
    CHECK_THROWS_AS(certify_bounds(m1, {1.0, 0.0}), PositivityError);
}

TEST_CASE("power iteration on easy matrices") {
    auto sym = SparseMatrix::from_dense_action({{2, 1}, {1, 2}});
    CertifiedRadius r = spectral_radius_interval(sym, 1e-10);
    CHECK(r.converged);
    CHECK(r.lo <= 3.0);
    CHECK(3.0 <= r.hi);
    CHECK(r.hi - r.lo <= 1e-9 * 3.0);

    auto ones = SparseMatrix::from_dense_action({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
    CertifiedRadius r2 = spectral_radius_interval(ones, 1e-12);
    CHECK(r2.lo <= 3.0);
    CHECK(3.0 <= r2.hi);
    CHECK(r2.iterations <= 2);
}

TEST_CASE("column-stochastic action pins radius 1") {
    // columns of the action (rows of the dense input) summing to 1
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int n = 40;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& r : rows) {
        double s = 0.0;
        for (auto& x : r) {
            x = u(rng);
            s += x;
        }
        for (auto& x : r) x /= s;
    }
    CertifiedRadius c = spectral_radius_interval(SparseMatrix::from_dense_action(rows), 1e-9);
    CHECK(c.lo <= 1.0);
    CHECK(1.0 <= c.hi);
    CHECK(c.hi - c.lo <= 1e-8);
}

TEST_CASE("soundness on random sparse matrices vs dense oracle") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> dim(2, 60);
    for (int trial = 0; trial < 120; ++trial) {
        int n = dim(rng);
        std::vector<std::vector<double>> rows(static_cast<size_t>(n),
                                              std::vector<double>(static_cast<size_t>(n), 0.0));
        double density = 0.05 + 0.5 * u(rng);
        for (int i = 0; i < n; ++i) {
            bool any = false;
            for (int j = 0; j < n; ++j)
                if (u(rng) < density) {
                    rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = u(rng);
                    any = true;
                }
            if (!any) rows[static_cast<size_t>(i)][static_cast<size_t>(rng() % n)] = u(rng);
        }
        double oracle = dense_radius(rows);
        CertifiedRadius c = spectral_radius_interval(SparseMatrix::from_dense_action(rows), 1e-7);
        CHECK(c.lo <= oracle * (1 + 1e-9) + 1e-12);
        CHECK(oracle <= c.hi * (1 + 1e-9) + 1e-12);
    }
}

TEST_CASE("more iterations never loosen the certificate (positive matrices)") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    const int n = 30;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (auto& r : rows)
        for (auto& x : r) x = u(rng);
    SparseMatrix m = SparseMatrix::from_dense_action(rows);

    double prev_width = 1e300;
    std::vector<double> w(n, 1.0), y(n);
    for (int it = 0; it < 40; ++it) {
        CertifiedRadius c = certify_bounds(m, w);
        CHECK(c.hi - c.lo <= prev_width + 1e-10 * std::max(1.0, c.hi));
        prev_width = c.hi - c.lo;
        transfer_apply(m, w, y);
        double mx = 0;
        for (double v : y) mx = std::max(mx, v);
        for (int i = 0; i < n; ++i)
            w[static_cast<size_t>(i)] = std::max(y[static_cast<size_t>(i)] / mx, 1e-300);
    }
}

TEST_CASE("scale invariance of certificates") {
    auto m = SparseMatrix::from_dense_action({{1, 2, 0}, {0.5, 0, 3}, {1, 1, 1}});
    std::vector<double> w = {1.0, 0.7, 1.3};
    CertifiedRadius base = certify_bounds(m, w);
    SparseMatrix scaled = m;
    scaled.scale *= 4.5;
    CertifiedRadius big = certify_bounds(scaled, w);
    CHECK(big.lo == doctest::Approx(4.5 * base.lo).epsilon(1e-12));
    CHECK(big.hi == doctest::Approx(4.5 * base.hi).epsilon(1e-12));
}

TEST_CASE("bump rows join the action and the stats") {
    auto m = SparseMatrix::from_dense_action({{1, 0}, {0, 1}});
    SparseMatrix b = m;
    b.bump_row = 0;
    b.bump_value = 0.25;
    std::vector<double> w{2.0, 3.0}, y(2);
    transfer_apply(b, w, y);
    // every action component gains bump * w[bump_row]
    CHECK(y[0] == doctest::Approx(2.0 + 0.25 * 2.0));
    CHECK(y[1] == doctest::Approx(3.0 + 0.25 * 2.0));
    CHECK(b.value(0, 0) == doctest::Approx(1.25));
    CHECK(b.value(0, 1) == doctest::Approx(0.25));

    ColumnStats st = column_stats(b);
    CHECK(st.min_col_sum == doctest::Approx(1.25));
}

TEST_CASE("matrix dump round-trips") {
    auto m = SparseMatrix::from_dense_action({{1.0 / 3.0, 2}, {3, 4.000000000000123}});
    dump_matrix(m, "mat_roundtrip.txt");
    SparseMatrix back = load_matrix("mat_roundtrip.txt");
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(back.value(i, j) == m.value(i, j));
    std::remove("mat_roundtrip.txt");
}
