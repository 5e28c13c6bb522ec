#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "dimcert/mesh.hpp"

using namespace dimcert;

namespace {
Region unit_disk() { return Region{Vec{0, 0}, 1.0, 0}; }
}

TEST_CASE("disk mesh: size, coverage, h bound") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.5, 0.3);
    CHECK(mesh.h_max <= 0.5);
    CHECK(mesh.node_count() >= 13);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int located = 0;
    for (int i = 0; i < 10000; ++i) {
        Vec p{u(rng), u(rng)};
        if (norm(p) > 1.0) continue;
        BarycentricLocation loc = locate(mesh, p, 0);
        CHECK(loc.simplex_index >= 0);
        ++located;
    }
    CHECK(located > 7000);
}

TEST_CASE("locate: node hit, centroid, affine exactness") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.3, 0.2);

    // node hit: one lambda is 1
    Vec xn = mesh.nodes[static_cast<size_t>(mesh.node_count() / 2)];
    BarycentricLocation loc = locate(mesh, xn, 0);
    double mx = 0;
    for (double l : loc.lambdas) mx = std::max(mx, l);
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));

    // centroid of simplex 7
    {
        const int32_t* nd = mesh.simplex_nodes(7);
        Vec c = (mesh.nodes[static_cast<size_t>(nd[0])] + mesh.nodes[static_cast<size_t>(nd[1])] +
                 mesh.nodes[static_cast<size_t>(nd[2])]) *
                (1.0 / 3.0);
        BarycentricLocation lc = locate(mesh, c, 0);
        CHECK(lc.simplex_index == 7);
        for (int q = 0; q < 3; ++q)
            CHECK(lc.lambdas[static_cast<size_t>(q)] == doctest::Approx(1.0 / 3).epsilon(1e-10));
    }

    // interpolating the coordinate functions reproduces the point
    NodalVector fx(static_cast<size_t>(mesh.node_count())), fy(fx.size());
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        fx[static_cast<size_t>(i)] = mesh.nodes[static_cast<size_t>(i)][0];
        fy[static_cast<size_t>(i)] = mesh.nodes[static_cast<size_t>(i)][1];
    }
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 500; ++i) {
        Vec p{u(rng), u(rng)};
        BarycentricLocation l = locate(mesh, p, 0);
        CHECK(std::abs(interpolate(mesh, fx, l) - p[0]) < 1e-12);
        CHECK(std::abs(interpolate(mesh, fy, l) - p[1]) < 1e-12);
    }
}

TEST_CASE("partition of unity and affine exactness at random points") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.23, 0.2);
    NodalVector ones(static_cast<size_t>(mesh.node_count()), 1.0);
    NodalVector aff(ones.size());
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        const Vec& p = mesh.nodes[static_cast<size_t>(i)];
        aff[static_cast<size_t>(i)] = 3.0 * p[0] - 2.0 * p[1] + 0.25;
    }
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = 0;
    for (int i = 0; n < 10000 && i < 100000; ++i) {
        Vec p{u(rng), u(rng)};
        if (norm(p) > 0.999) continue;
        ++n;
        BarycentricLocation l = locate(mesh, p, 0);
        CHECK(interpolate(mesh, ones, l) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(interpolate(mesh, aff, l) ==
              doctest::Approx(3.0 * p[0] - 2.0 * p[1] + 0.25).epsilon(1e-11));
    }
}

TEST_CASE("no duplicated node coordinates") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.4, 0.3);
    for (int64_t i = 0; i < mesh.node_count(); ++i)
        for (int64_t j = i + 1; j < mesh.node_count(); ++j)
            CHECK(norm(mesh.nodes[static_cast<size_t>(i)] - mesh.nodes[static_cast<size_t>(j)]) >
                  1e-12);
}

namespace {
// dense sampling oracle for the interpolation error of f(x) = |x|^2
double quad_interp_error(const Mesh& mesh) {
    NodalVector f(static_cast<size_t>(mesh.node_count()));
    for (int64_t i = 0; i < mesh.node_count(); ++i)
        f[static_cast<size_t>(i)] = norm2(mesh.nodes[static_cast<size_t>(i)]);
    double worst = 0.0;
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int n = 0;
    for (int i = 0; n < 20000 && i < 300000; ++i) {
        Vec p{u(rng), u(rng)};
        if (norm(p) > 0.995) continue;
        ++n;
        BarycentricLocation l = locate(mesh, p, 0);
        worst = std::max(worst, std::abs(interpolate(mesh, f, l) - norm2(p)));
    }
    return worst;
}
} // namespace

TEST_CASE("quadratic convergence of nodal interpolation") {
    double C_BH = 3.0 * std::sqrt(6.0);
    double prev = 0.0;
    for (double h : {0.2, 0.1, 0.05}) {
        Mesh mesh = build_mesh(2, {unit_disk()}, h, 0.25);
        double err = quad_interp_error(mesh);
        CHECK(err <= 2.0 * C_BH * h * h * 2.0);
        if (prev > 0.0) {
            double ratio = prev / err;
            CHECK(ratio >= 3.2);
            CHECK(ratio <= 4.8);
        }
        prev = err;
    }
}

TEST_CASE("refinement roughly quadruples the node count") {
    Mesh coarse = build_mesh(2, {unit_disk()}, 0.1, 0.1);
    Mesh fine = build_mesh(2, {unit_disk()}, 0.05, 0.1);
    double growth =
        static_cast<double>(fine.node_count()) / static_cast<double>(coarse.node_count());
    CHECK(growth >= 3.5);
    CHECK(growth <= 4.5);
}

TEST_CASE("3D ball mesh: tetrahedra are sound") {
    Region ball{Vec{0.5, 0, 0}, 0.5, 0};
    Mesh mesh = build_mesh(3, {ball}, 0.25, 0.2);
    CHECK(mesh.h_max <= 0.25);
    MeshStats st = mesh_stats(mesh);
    CHECK(st.min_quality > 0.0);
    CHECK(st.simplex_count > 0);

    // locate + partition of unity in 3D
    NodalVector ones(static_cast<size_t>(mesh.node_count()), 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    int n = 0;
    for (int i = 0; n < 3000 && i < 100000; ++i) {
        Vec p{0.5 + u(rng), u(rng), u(rng)};
        if (norm(p - ball.center) > 0.499) continue;
        ++n;
        BarycentricLocation l = locate(mesh, p, 0);
        CHECK(interpolate(mesh, ones, l) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("multi-region meshes stay apart") {
    std::vector<Region> disks = {Region{Vec{-2, 0}, 0.8, 0}, Region{Vec{2, 0}, 0.8, 1}};
    Mesh mesh = build_mesh(2, disks, 0.2, 0.15);
    for (int64_t i = 0; i < mesh.node_count(); ++i) {
        int v = mesh.region_of_node[static_cast<size_t>(i)];
        CHECK(norm(mesh.nodes[static_cast<size_t>(i)] - disks[static_cast<size_t>(v)].center) <
              0.8 + 0.15 + 0.2 + 1e-9);
    }
    BarycentricLocation l = locate(mesh, Vec{2.1, 0.1}, 1);
    CHECK(mesh.region_of_simplex[static_cast<size_t>(l.simplex_index)] == 1);
}

TEST_CASE("snapping keeps nodes inside X(delta)") {
    // huge h against small delta forces rim snapping
    Region disk = unit_disk();
    Mesh mesh = build_mesh(2, {disk}, 0.6, 0.05);
    for (int64_t i = 0; i < mesh.node_count(); ++i)
        CHECK(norm(mesh.nodes[static_cast<size_t>(i)]) <= 1.0 + 0.05 + 1e-12);
    CHECK(mesh.delta_used <= 0.05 + 1e-12);
    // boundary still covered (CoverageError would have thrown in build)
    for (int i = 0; i < 256; ++i) {
        double a = 2 * M_PI * i / 256;
        CHECK_NOTHROW(locate(mesh, Vec{0.99 * std::cos(a), 0.99 * std::sin(a)}, 0));
    }
}

TEST_CASE("locate outside the mesh fails loudly") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.3, 0.1);
    CHECK_THROWS_AS(locate(mesh, Vec{2.5, 2.5}, 0), NotFoundError);
}

TEST_CASE("mesh dump round-trips bit-exactly") {
    Mesh mesh = build_mesh(2, {unit_disk()}, 0.45, 0.2);
    std::string path = "mesh_roundtrip.txt";
    dump_mesh(mesh, path);
    Mesh back = load_mesh(path);
    REQUIRE(back.node_count() == mesh.node_count());
    REQUIRE(back.simplex_count() == mesh.simplex_count());
    for (int64_t i = 0; i < mesh.node_count(); ++i)
        for (int a = 0; a < 2; ++a)
            CHECK(back.nodes[static_cast<size_t>(i)][a] == mesh.nodes[static_cast<size_t>(i)][a]);
    for (size_t k = 0; k < mesh.simplices.size(); ++k)
        CHECK(back.simplices[k] == mesh.simplices[k]);

    // and dumps identically again
    dump_mesh(back, "mesh_roundtrip2.txt");
    std::ifstream a(path), b("mesh_roundtrip2.txt");
    std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    std::remove(path.c_str());
    std::remove("mesh_roundtrip2.txt");
}
