#include <doctest.h>

#include <cmath>

#include "dimcert/gdms.hpp"
#include "dimcert/systems.hpp"

using namespace dimcert;

TEST_CASE("lattice generator sets") {
    SystemSpec e4 = cf_system(2, CfGenerators::finite_list,
                              {Vec(1, 0), Vec(1, 1), Vec(1, -1), Vec(2, 0)});
    CHECK(e4.alphabet.maps.size() == 4);

    SystemSpec e5 = cf_system(
        3, CfGenerators::finite_list,
        {Vec(1, 0, 0), Vec(1, 1, 0), Vec(1, -1, 0), Vec(1, 0, 1), Vec(1, 0, -1)});
    CHECK(e5.alphabet.maps.size() == 5);

    // full 2D lattice: e1 >= 1, |e| <= R+2
    SystemSpec lat = cf_system(2, CfGenerators::full_lattice, {}, 8.0);
    int count = 0;
    for (int e1 = 1; e1 <= 10; ++e1)
        for (int e2 = -10; e2 <= 10; ++e2)
            if (e1 * e1 + e2 * e2 <= 100) ++count;
    CHECK(static_cast<int>(lat.alphabet.maps.size()) == count);
}

TEST_CASE("gaussian prime characterization vs brute-force norms") {
    CHECK(is_gaussian_prime(1, 1));
    CHECK(is_gaussian_prime(3, 0));
    CHECK(!is_gaussian_prime(2, 0));
    CHECK(is_gaussian_prime(2, 1));
    CHECK(!is_gaussian_prime(4, 0));

    auto naive_prime = [](int64_t m) {
        if (m < 2) return false;
        for (int64_t d = 2; d * d <= m; ++d)
            if (m % d == 0) return false;
        return true;
    };
    for (int a = 1; a <= 50; ++a)
        for (int b = -50; b <= 50; ++b) {
            bool expect = (b == 0) ? (naive_prime(a) && a % 4 == 3)
                                   : naive_prime(static_cast<int64_t>(a) * a +
                                                 static_cast<int64_t>(b) * b);
            CHECK(is_gaussian_prime(a, b) == expect);
        }

    SystemSpec gp = cf_system(2, CfGenerators::gaussian_primes, {}, 10.0);
    int count = 0;
    for (int a = 1; a <= 12; ++a)
        for (int b = -12; b <= 12; ++b)
            if (a * a + b * b <= 144 && is_gaussian_prime(a, b)) ++count;
    CHECK(static_cast<int>(gp.alphabet.maps.size()) == count);
}

TEST_CASE("abc maps: values, norms, extension radii") {
    SystemSpec spec = abc_system();
    Vec y = apply(spec.alphabet.maps[0], Vec{0, 0});
    CHECK(y[0] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(std::abs(y[1]) < 1e-15);

    // sup over X of |Dphi_1| = |a| + 2 r |c| = 0.29
    double worst = 0.0;
    for (int i = 0; i < 720; ++i) {
        double a = 2 * M_PI * i / 720;
        worst = std::max(worst,
                         derivative_norm(spec.alphabet.maps[0], Vec{0.2 * std::cos(a), 0.2 * std::sin(a)}));
    }
    CHECK(worst <= 0.29 + 1e-12);
    CHECK(worst >= 0.29 - 1e-4);

    // radius where |a_1| + 2 r |c_1| reaches 1
    double r1 = (1.0 - 0.25) / (2.0 * 0.1);
    CHECK(r1 == doctest::Approx(3.75));
}

TEST_CASE("disk group: incidence and mapping direction") {
    SystemSpec s2 = schottky2d_system();
    CHECK(s2.alphabet.maps.size() == 6);
    for (const auto& f : s2.alphabet.maps) CHECK(f.source_vertex != f.target_vertex);

    // g_1 sends the other disks into disk 1
    for (const auto& f : s2.alphabet.maps) {
        const Region& src = s2.x_regions[static_cast<size_t>(f.source_vertex)];
        const Region& tgt = s2.x_regions[static_cast<size_t>(f.target_vertex)];
        for (int i = 0; i < 1000; ++i) {
            double a = 2 * M_PI * i / 1000;
            Vec p = src.center + Vec{src.radius * std::cos(a), src.radius * std::sin(a)};
            CHECK(norm(apply(f, p) - tgt.center) <= tgt.radius + 1e-12);
        }
    }

    SystemSpec s3 = schottky3d_system();
    CHECK(s3.alphabet.maps.size() == 12);
    double sep = 1.5 * std::sqrt(2.0) - 1.0;
    CHECK(sep == doctest::Approx(1.121320).epsilon(1e-6));
    CHECK(s3.eta == doctest::Approx(sep).epsilon(1e-12));
}

TEST_CASE("gasket maps: matrix product equals functional composition") {
    const double lam = std::sqrt(3.0);
    ConformalMap f = make_moebius2d(Mat2c{lam - 1.0, 1.0, -1.0, lam + 1.0}, false);
    SystemSpec spec = apollonian_system({1, 2, 3, 4, 5, 6}, 3, true);
    REQUIRE(spec.alphabet.maps.size() == 18);

    // f(D) = B(2/(2+lam), lam/(2+lam))
    BallImage fd = image_ball(f, Region{Vec{0, 0}, 1.0, 0}, 2);
    CHECK(fd.center[0] == doctest::Approx(2.0 / (2.0 + lam)).epsilon(1e-12));
    CHECK(std::abs(fd.center[1]) < 1e-12);
    CHECK(fd.radius == doctest::Approx(lam / (2.0 + lam)).epsilon(1e-12));

    int idx = 0;
    for (int n = 1; n <= 3; ++n)
        for (int k = 1; k <= 6; ++k, ++idx) {
            const ConformalMap& phi = spec.alphabet.maps[static_cast<size_t>(idx)];
            double theta = ((k % 2 == 0) ? 1.0 : -1.0) * 2.0 * M_PI / 3.0;
            double theta_p = 2.0 * M_PI * k / 3.0;
            for (int i = 0; i < 100; ++i) {
                double a = 2 * M_PI * i / 100;
                cplx z = 0.85 * std::polar(1.0, a);
                // R_{theta'} o f^n o R_theta o f, evaluated map by map
                cplx w = (lam - 1.0) * z + 1.0;
                w /= (-z + lam + 1.0);
                w *= std::polar(1.0, theta);
                for (int m = 0; m < n; ++m) w = ((lam - 1.0) * w + 1.0) / (-w + lam + 1.0);
                w *= std::polar(1.0, theta_p);
                Vec got = apply(phi, from_complex(z));
                CHECK(std::abs(to_complex(got) - w) < 1e-12);
            }
        }
}

TEST_CASE("gasket matrices: determinant of the power block") {
    // lam^n [[1-n/lam, n/lam],[-n/lam, n/lam+1]] has determinant lam^{2n}
    const double lam = std::sqrt(3.0);
    for (int n = 1; n <= 5; ++n) {
        Mat2c V{-1.0, 1.0, -1.0, 0.0};
        Mat2c J{1.0, n / lam, 0.0, 1.0};
        Mat2c Vinv{0.0, -1.0, 1.0, -1.0};
        Mat2c block = V * J * Vinv;
        double powl = std::pow(lam, n);
        Mat2c scaled{powl * block.a, powl * block.b, powl * block.cc, powl * block.d};
        CHECK(std::abs(scaled.det()) == doctest::Approx(std::pow(lam, 2 * n)).epsilon(1e-12));
    }
}

TEST_CASE("gasket derivative norms obey the 3*1.28/n^2 envelope") {
    SystemSpec spec = apollonian_system({1, 2, 3, 4, 5, 6}, 40, false);
    int idx = 0;
    for (int n = 1; n <= 40; ++n)
        for (int k = 1; k <= 6; ++k, ++idx) {
            double worst = 0.0;
            // sup over the image of the unit disk under R o f, where the norm peaks
            for (int i = 0; i < 400; ++i) {
                double a = 2 * M_PI * i / 400;
                Vec p{std::cos(a), std::sin(a)};
                worst = std::max(worst, derivative_norm(spec.alphabet.maps[static_cast<size_t>(idx)], p));
            }
            CHECK(worst < 3.0 * 1.28 / (static_cast<double>(n) * n));
        }
    CHECK(apollonian_system({1, 2, 3, 4, 5, 6}, 2, true).alphabet.maps.size() == 12);
}

TEST_CASE("catalog entries validate and carry the documented eta") {
    for (const auto& e : catalog()) {
        double trunc = std::min(e.default_truncation, e.name == "apollonian-odd" ? 60.0 : 12.0);
        SystemSpec spec = e.build(trunc);
        CHECK(spec.n == e.n);
        // catalog eta matches the documented constants exactly
        if (e.name == "schottky2d") CHECK(e.eta == doctest::Approx(2.0 - 2.0 / std::sqrt(3.0)).epsilon(1e-15));
        if (e.name == "schottky3d") CHECK(e.eta == doctest::Approx(1.5 * std::sqrt(2.0) - 1.0).epsilon(1e-15));
        if (e.name.rfind("apollonian", 0) == 0) CHECK(e.eta == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
        if (e.name.rfind("cf", 0) == 0) CHECK(e.eta == 1.0);

        ValidationReport rep = validate_system(spec, 1000);
        for (const auto& c : rep.checks) {
            INFO(e.name, ": ", c.name, " margin=", c.margin);
            CHECK(c.pass);
        }
    }
}
