#include <doctest.h>

#include <cmath>

#include "dimcert/dim_solver.hpp"
#include "dimcert/record.hpp"
#include "dimcert/systems.hpp"

using namespace dimcert;

namespace {

struct PairSetup {
    SystemSpec spec;
    Mesh mesh;
    ErrorBudget budget;
    SolverSetup setup;
};

// two halving maps: dimension exactly 1, radius 2 (1/2)^t in closed form
PairSetup make_pair(double err) {
    PairSetup p;
    p.spec = similitude_system({0.5, 0.5}, {Vec{0.5, 0}, Vec{-0.5, 0}});
    p.mesh = build_mesh(2, p.spec.x_regions, mesh_balls_for(p.spec, 0.1), 0.1, 0.1);
    p.budget.C_BH = 7.35;
    p.budget.C1 = 1.0;
    p.budget.C2 = 1.0;
    p.budget.eta = 9.0;
    p.budget.err_max = err;
    p.budget.t_upper_used = 1.3;
    p.setup.system = &p.spec;
    p.setup.mesh = &p.mesh;
    p.setup.budget = p.budget;
    p.setup.tol_spectral = 1e-10;
    return p;
}

} // namespace

TEST_CASE("certify_lower / certify_upper on the halving pair") {
    PairSetup p = make_pair(1e-3);

    // radius(t) = 2 (1/2)^t (1 -/+ err): crossing at t = 1 -/+ O(err)
    auto [ok09, c09] = certify_lower(p.setup, 0.9);
    CHECK(ok09);
    CHECK(c09.lo == doctest::Approx(std::pow(2.0, 0.1) * (1 - 1e-3)).epsilon(1e-9));

    auto [ok11, c11] = certify_lower(p.setup, 1.1);
    CHECK(!ok11);

    auto [up11, u11] = certify_upper(p.setup, 1.1);
    CHECK(up11);
    CHECK(u11.hi == doctest::Approx(std::pow(2.0, -0.1) * (1 + 1e-3)).epsilon(1e-9));

    auto [up10, u10] = certify_upper(p.setup, 1.0);
    CHECK(!up10); // radius = 1 + err > 1
    (void)u10;
}

TEST_CASE("bracketing the halving pair hits the closed-form window") {
    PairSetup p = make_pair(1e-3);
    CertifiedInterval iv = bracket_dimension(p.setup, 0.004, {0.9, 1.1});
    // exact crossings: 1 -/+ log2(1 +/- err)
    double lo_star = 1.0 + std::log2(1.0 - 1e-3);
    double hi_star = 1.0 - std::log2(1.0 + 1e-3) + 1e-12;
    CHECK(iv.t_lo <= lo_star + 1e-9);
    CHECK(iv.t_hi >= hi_star - 1e-9);
    CHECK(iv.t_lo < 1.0);
    CHECK(1.0 < iv.t_hi);
    CHECK(iv.t_hi - iv.t_lo <= 0.004);
    CHECK(iv.evidence_lo.lo > 1.0);
    CHECK(iv.evidence_hi.hi < 1.0);

    // evidence is re-checkable from the stored witnesses
    TransferMatrices tm = assemble(p.spec, p.mesh, iv.t_lo, p.budget);
    CertifiedRadius re = certify_bounds(tm.A, iv.evidence_lo.witness);
    CHECK(re.lo > 1.0);
}

TEST_CASE("trace midpoints decrease in t") {
    PairSetup p = make_pair(5e-4);
    CertifiedInterval iv = bracket_dimension(p.setup, 0.01, {0.85, 1.15});
    for (const auto& a : iv.trace)
        for (const auto& b : iv.trace)
            if (b.t > a.t + 1e-9) CHECK(0.5 * (b.lo_A + b.hi_B) <= 0.5 * (a.lo_A + a.hi_B) + 1e-9);
}

TEST_CASE("interval always contains the similitude reference dimension") {
    for (auto ratios : {std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.25, 0.25},
                        std::vector<double>{0.4, 0.22}}) {
        std::vector<Vec> centers;
        double ang = 0.0;
        for (size_t i = 0; i < ratios.size(); ++i) {
            centers.push_back(Vec{0.6 * std::cos(ang), 0.6 * std::sin(ang)});
            ang += 2.0 * M_PI / static_cast<double>(ratios.size());
        }
        if (ratios.size() == 2) centers = {Vec{0.5, 0}, Vec{-0.5, 0}};
        SystemSpec spec = similitude_system(ratios, centers);
        Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), 0.08, 0.1);
        ErrorBudget b;
        b.C_BH = 7.35;
        b.C1 = 1.0;
        b.C2 = 1.0;
        b.eta = 9.0;
        b.err_max = 5e-4;
        b.t_upper_used = 1.5;
        SolverSetup setup;
        setup.system = &spec;
        setup.mesh = &mesh;
        setup.budget = b;
        setup.tol_spectral = 1e-10;
        double ref = hutchinson_dimension(ratios);
        CertifiedInterval iv = bracket_dimension(setup, 0.01, {ref - 0.1, ref + 0.1});
        CHECK(iv.t_lo <= ref);
        CHECK(ref <= iv.t_hi);
    }
}

TEST_CASE("nesting under mesh refinement") {
    SystemSpec spec = similitude_system({0.5, 0.5}, {Vec{0.5, 0}, Vec{-0.5, 0}});
    auto run_at = [&](double h, double err) {
        Mesh mesh = build_mesh(2, spec.x_regions, mesh_balls_for(spec, 0.1), h, 0.1);
        ErrorBudget b;
        b.C_BH = 7.35;
        b.C1 = 1.0;
        b.C2 = 1.0;
        b.eta = 9.0;
        b.err_max = err;
        b.t_upper_used = 1.3;
        SolverSetup setup;
        setup.system = &spec;
        setup.mesh = &mesh;
        setup.budget = b;
        setup.tol_spectral = 1e-10;
        return bracket_dimension(setup, 8.0 * err, {0.9, 1.1});
    };
    CertifiedInterval coarse = run_at(0.2, 2e-3);
    CertifiedInterval fine = run_at(0.1, 5e-4);
    CHECK(fine.t_lo <= coarse.t_hi);
    CHECK(coarse.t_lo <= fine.t_hi);
    CHECK(fine.t_hi - fine.t_lo <= coarse.t_hi - coarse.t_lo + 1e-12);
}

TEST_CASE("hopeless hints raise BracketFailure") {
    PairSetup p = make_pair(1e-3);
    p.setup.max_evals = 4;
    CHECK_THROWS_AS(bracket_dimension(p.setup, 1e-9, {9.0, 9.5}), BracketFailure);
}
