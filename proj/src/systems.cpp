#include "dimcert/systems.hpp"

#include <algorithm>
#include <cmath>

#include "dimcert/errors.hpp"
#include "dimcert/sampling.hpp"

namespace dimcert {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

BallImage image_ball_sampled(const ConformalMap& f, const Region& src, int n, uint64_t seed) {
    auto pts = ball_samples(src, n, 200, seed);
    Vec c{0, 0, 0};
    std::vector<Vec> imgs;
    imgs.reserve(pts.size());
    for (const auto& p : pts) {
        Vec y = apply(f, p);
        imgs.push_back(y);
        c += y;
    }
    c = c * (1.0 / static_cast<double>(imgs.size()));
    double rad = 0.0;
    for (const auto& y : imgs) rad = std::max(rad, norm(y - c));
    return {c, rad};
}

} // namespace

BallImage image_ball(const ConformalMap& f, const Region& src, int n, uint64_t seed) {
    if (f.kind == MapKind::polynomial2d && norm(src.center) == 0.0) {
        double r = src.radius;
        return {from_complex(f.pb), std::abs(f.pa) * r + std::abs(f.pc) * r * r};
    }
    if (f.kind == MapKind::moebius2d || f.kind == MapKind::mobius_nd) {
        bool has_pole = false;
        Vec pole;
        if (f.kind == MapKind::moebius2d && std::abs(f.mat.cc) > 0) {
            cplx p = -f.mat.d / f.mat.cc;
            if (f.conjugate_flag) p = std::conj(p);
            pole = from_complex(p);
            has_pole = true;
        } else if (f.kind == MapKind::mobius_nd && f.invert) {
            pole = f.pre_translate;
            has_pole = true;
        }
        if (has_pole) {
            double d = norm(pole - src.center);
            if (d > src.radius) {
                // image of a ball is a ball; the diameter through the pole maps
                // to the image diameter
                Vec dir = (pole - src.center) * (1.0 / d);
                Vec q1 = apply(f, src.center + dir * src.radius);
                Vec q2 = apply(f, src.center - dir * src.radius);
                return {(q1 + q2) * 0.5, 0.5 * norm(q1 - q2)};
            }
        } else {
            Vec q0 = apply(f, src.center);
            double s = derivative_norm(f, src.center);
            return {q0, s * src.radius};
        }
    }
    return image_ball_sampled(f, src, n, seed);
}

SystemSpec cf_system(int n, CfGenerators kind, const std::vector<Vec>& generators, double R) {
    if (n != 2 && n != 3) throw UnsupportedDimension("cf_system: n must be 2 or 3");
    SystemSpec spec;
    spec.n = n;
    spec.eta = 1.0;
    spec.moebius_only = true;
    Vec vhalf = (n == 2) ? Vec{0.5, 0.0} : Vec{0.5, 0.0, 0.0};
    spec.x_regions = {Region{vhalf, 0.5, 0}};
    spec.w_regions = {Region{vhalf, 1.5, 0}};

    std::vector<Vec> gens;
    auto push_lattice = [&](auto&& accept) {
        int Ri = static_cast<int>(std::floor(R + 2.0));
        double lim2 = (R + 2.0) * (R + 2.0);
        for (int e1 = 1; e1 <= Ri; ++e1)
            for (int e2 = -Ri; e2 <= Ri; ++e2) {
                if (n == 2) {
                    double q = static_cast<double>(e1) * e1 + static_cast<double>(e2) * e2;
                    if (q <= lim2 && accept(e1, e2, 0)) gens.push_back(Vec(e1, e2));
                } else {
                    for (int e3 = -Ri; e3 <= Ri; ++e3) {
                        double q = static_cast<double>(e1) * e1 + static_cast<double>(e2) * e2 +
                                   static_cast<double>(e3) * e3;
                        if (q <= lim2 && accept(e1, e2, e3)) gens.push_back(Vec(e1, e2, e3));
                    }
                }
            }
        std::sort(gens.begin(), gens.end(), [](const Vec& a, const Vec& b) {
            double qa = norm2(a), qb = norm2(b);
            if (qa != qb) return qa < qb;
            if (a[0] != b[0]) return a[0] < b[0];
            if (a[1] != b[1]) return a[1] < b[1];
            return a[2] < b[2];
        });
    };

    switch (kind) {
    case CfGenerators::finite_list:
        gens = generators;
        spec.alphabet.kind = Alphabet::Kind::finite;
        spec.name = (n == 2) ? "cf2-finite" : "cf3-finite";
        break;
    case CfGenerators::full_lattice:
        push_lattice([](int, int, int) { return true; });
        spec.alphabet.kind = Alphabet::Kind::lattice_cf;
        spec.alphabet.truncation = R;
        spec.alphabet.tail = TailDescriptor{TailDescriptor::Kind::cf_integral, n, 0};
        spec.name = (n == 2) ? "cf2-lattice" : "cf3-lattice";
        break;
    case CfGenerators::gaussian_primes:
        if (n != 2) throw UnsupportedDimension("cf_system: gaussian primes need n = 2");
        push_lattice([](int a, int b, int) {
            return is_gaussian_prime(a, b);
        });
        spec.alphabet.kind = Alphabet::Kind::gaussian_primes;
        spec.alphabet.truncation = R;
        spec.alphabet.tail = TailDescriptor{TailDescriptor::Kind::cf_integral, n, 0};
        spec.name = "cf2-gauss-primes";
        break;
    }
    for (const auto& e : gens) {
        // phi_e(x) = (x+e)/|x+e|^2: inversion about the unit sphere at -e
        Vec minus_e = Vec{-e[0], -e[1], -e[2]};
        spec.alphabet.maps.push_back(make_mobius_nd(minus_e, Vec{0, 0, 0}, 1.0, Mat3{}, true, 0, 0));
    }
    spec.mesh_balls = spec.x_regions;
    return spec;
}

bool is_gaussian_prime(int64_t a, int64_t b) {
    auto is_prime = [](int64_t m) {
        if (m < 2) return false;
        for (int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
            if (m == p) return true;
            if (m % p == 0) return false;
        }
        // deterministic Miller-Rabin, enough bases for anything 64-bit
        auto mulmod = [](uint64_t x, uint64_t y, uint64_t mod) {
            return static_cast<uint64_t>(static_cast<__uint128_t>(x) * y % mod);
        };
        auto powmod = [&](uint64_t base, uint64_t e, uint64_t mod) {
            uint64_t r = 1;
            base %= mod;
            while (e) {
                if (e & 1) r = mulmod(r, base, mod);
                base = mulmod(base, base, mod);
                e >>= 1;
            }
            return r;
        };
        uint64_t d = static_cast<uint64_t>(m - 1);
        int s = 0;
        while ((d & 1) == 0) {
            d >>= 1;
            ++s;
        }
        for (uint64_t base : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull,
                              37ull}) {
            uint64_t x = powmod(base, d, static_cast<uint64_t>(m));
            if (x == 1 || x == static_cast<uint64_t>(m - 1)) continue;
            bool composite = true;
            for (int i = 1; i < s; ++i) {
                x = mulmod(x, x, static_cast<uint64_t>(m));
                if (x == static_cast<uint64_t>(m - 1)) {
                    composite = false;
                    break;
                }
            }
            if (composite) return false;
        }
        return true;
    };
    if (a == 0 && b == 0) return false;
    if (a == 0) return is_prime(std::llabs(b)) && std::llabs(b) % 4 == 3;
    if (b == 0) return is_prime(std::llabs(a)) && std::llabs(a) % 4 == 3;
    return is_prime(a * a + b * b);
}

SystemSpec abc_system() {
    SystemSpec spec;
    spec.n = 2;
    spec.name = "abc";
    spec.moebius_only = false;
    spec.eta = 1.0; // min(1, dist) convention; W below leaves dist = 1.05
    spec.x_regions = {Region{Vec{0, 0}, 0.2, 0}};
    spec.w_regions = {Region{Vec{0, 0}, 1.25, 0}};
    using namespace std::complex_literals;
    spec.alphabet.maps = {
        make_polynomial2d(0.25i, 0.1, 0.1),
        make_polynomial2d(0.2i, -0.1 - 0.1i, 0.05),
        make_polynomial2d(0.1, 0.1 - 0.1i, 0.04),
    };
    spec.mesh_balls = spec.x_regions;
    return spec;
}

namespace {

ConformalMap schottky2d_map(int j, int i) {
    // g_j(z) = c_j + (rho_j/3) / (z - c_j), as a matrix [[c_j, rho_j/3 - c_j^2],[1, -c_j]]
    using namespace std::complex_literals;
    static const cplx centers[3] = {2.0 / kSqrt3, -1.0 / kSqrt3 + 1.0i, -1.0 / kSqrt3 - 1.0i};
    static const cplx rho[3] = {1.0, std::exp(-2.0i * (M_PI / 3.0)), std::exp(2.0i * (M_PI / 3.0))};
    cplx c = centers[j];
    Mat2c m{c, rho[j] / 3.0 - c * c, 1.0, -c};
    return make_moebius2d(m, false, i, j);
}

} // namespace

SystemSpec schottky2d_system() {
    SystemSpec spec;
    spec.n = 2;
    spec.name = "schottky2d";
    spec.moebius_only = true;
    double r = 1.0 / kSqrt3;
    spec.eta = 2.0 - 2.0 / kSqrt3;
    Vec centers[3] = {Vec{2.0 / kSqrt3, 0.0}, Vec{-1.0 / kSqrt3, 1.0}, Vec{-1.0 / kSqrt3, -1.0}};
    for (int v = 0; v < 3; ++v) {
        spec.x_regions.push_back(Region{centers[v], r, v});
        spec.w_regions.push_back(Region{centers[v], r + spec.eta, v});
    }
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            if (i != j) spec.alphabet.maps.push_back(schottky2d_map(j, i));
    spec.mesh_balls = spec.x_regions;
    return spec;
}

SystemSpec schottky3d_system() {
    SystemSpec spec;
    spec.n = 3;
    spec.name = "schottky3d";
    spec.moebius_only = true;
    const double alpha = 0.75, r = 0.5;
    spec.eta = 1.5 * std::sqrt(2.0) - 1.0;
    Vec centers[4] = {Vec{alpha, alpha, alpha}, Vec{alpha, -alpha, -alpha},
                      Vec{-alpha, alpha, -alpha}, Vec{-alpha, -alpha, alpha}};
    for (int v = 0; v < 4; ++v) {
        spec.x_regions.push_back(Region{centers[v], r, v});
        spec.w_regions.push_back(Region{centers[v], r + spec.eta, v});
    }
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i)
            if (i != j)
                spec.alphabet.maps.push_back(
                    make_mobius_nd(centers[j], centers[j], r * r, Mat3{}, true, i, j));
    spec.mesh_balls = spec.x_regions;
    return spec;
}

namespace {

Mat2c rotation_matrix(double theta) {
    return Mat2c{std::polar(1.0, theta), 0.0, 0.0, 1.0};
}

} // namespace

SystemSpec apollonian_system(const std::vector<int>& k_set, int n_max, bool finite_family) {
    if (k_set.empty()) throw DomainError("apollonian_system: empty k set");
    SystemSpec spec;
    spec.n = 2;
    spec.moebius_only = true;
    spec.eta = kSqrt3;
    spec.x_regions = {Region{Vec{0, 0}, 1.0, 0}};
    spec.w_regions = {Region{Vec{0, 0}, 1.0 + kSqrt3, 0}};
    const double lam = kSqrt3;
    const Mat2c V{-1.0, 1.0, -1.0, 0.0};
    const Mat2c Vinv{0.0, -1.0, 1.0, -1.0};
    const Mat2c F{lam - 1.0, 1.0, -1.0, lam + 1.0};
    for (int n = 1; n <= n_max; ++n) {
        for (int k : k_set) {
            double theta = ((k % 2 == 0) ? 1.0 : -1.0) * 2.0 * M_PI / 3.0;
            double theta_p = std::fmod(2.0 * M_PI * k / 3.0, 2.0 * M_PI);
            Mat2c J{1.0, n / lam, 0.0, 1.0};
            Mat2c m = rotation_matrix(theta_p) * V * J * Vinv * rotation_matrix(theta) * F;
            // lambda^n prefactor cancels in the map; keep matrices normalized
            spec.alphabet.maps.push_back(make_moebius2d(m, false, 0, 0));
        }
    }
    if (finite_family) {
        spec.alphabet.kind = Alphabet::Kind::finite;
    } else {
        spec.alphabet.kind = Alphabet::Kind::apollonian;
        spec.alphabet.truncation = n_max;
        spec.alphabet.tail = TailDescriptor{TailDescriptor::Kind::apollonian_geometric, 2,
                                            static_cast<int>(k_set.size())};
    }
    spec.name = "apollonian";
    spec.mesh_balls = spec.x_regions;
    return spec;
}

SystemSpec similitude_system(const std::vector<double>& ratios, const std::vector<Vec>& centers,
                             int n) {
    if (ratios.size() != centers.size() || ratios.empty())
        throw DomainError("similitude_system: ratios/centers mismatch");
    SystemSpec spec;
    spec.n = n;
    spec.name = "similitude";
    spec.moebius_only = true;
    spec.x_regions = {Region{Vec{0, 0}, 1.0, 0}};
    spec.w_regions = {Region{Vec{0, 0}, 10.0, 0}};
    spec.eta = 9.0;
    for (size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 0 && ratios[i] < 1))
            throw DomainError("similitude_system: ratio outside (0,1)");
        if (norm(centers[i]) > 1.0)
            throw DomainError("similitude_system: center outside unit ball");
        spec.alphabet.maps.push_back(make_similitude(ratios[i], centers[i]));
    }
    for (size_t i = 0; i < ratios.size(); ++i)
        for (size_t j = i + 1; j < ratios.size(); ++j) {
            Vec ci = centers[i] * (1.0 - ratios[i]);
            Vec cj = centers[j] * (1.0 - ratios[j]);
            if (norm(ci - cj) < ratios[i] + ratios[j])
                throw OverlapError("similitude_system: image balls overlap");
        }
    spec.mesh_balls = spec.x_regions;
    return spec;
}

std::vector<Region> mesh_balls_for(const SystemSpec& spec, double delta) {
    std::vector<Region> out = spec.x_regions;
    bool is_cf = spec.alphabet.kind == Alphabet::Kind::lattice_cf ||
                 spec.alphabet.kind == Alphabet::Kind::gaussian_primes ||
                 spec.name.rfind("cf", 0) == 0;
    if (is_cf) {
        // off-center invariant enlargement: the ball through the origin with
        // center (rg, 0,..), rg = 1/(2(1-g)), g = delta/(1+delta); it contains
        // X, stays inside X(delta), and absorbs every image of every node
        double g = delta / (1.0 + delta);
        double rg = 0.5 / (1.0 - g);
        out[0].center = Vec{rg, 0.0, 0.0};
        out[0].radius = rg;
        return out;
    }
    if (spec.alphabet.kind == Alphabet::Kind::apollonian) {
        // fixed-point inflation against exact image balls: grow until the
        // enlarged disk absorbs its own images with headroom for node overshoot
        double R = spec.x_regions[0].radius + delta;
        for (int pass = 0; pass < 64; ++pass) {
            Region probe{spec.x_regions[0].center, R + 0.5 * delta, 0};
            double extent = 0.0;
            for (const auto& f : spec.alphabet.maps) {
                BallImage bi = image_ball(f, probe, spec.n);
                extent = std::max(extent, norm(bi.center - spec.x_regions[0].center) + bi.radius);
            }
            if (extent <= R) break;
            R = extent * (1.0 + 1e-9);
            if (R > spec.w_regions[0].radius - 0.5 * delta)
                throw GeometryError("mesh_balls_for: inflation escaped the extension domain");
        }
        out[0].radius = R;
        return out;
    }
    for (auto& r : out) r.radius += delta;
    return out;
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        auto cf4 = [](double) {
            SystemSpec s = cf_system(2, CfGenerators::finite_list,
                                     {Vec(1, 0), Vec(1, 1), Vec(1, -1), Vec(2, 0)});
            s.name = "cf2-4gen";
            return s;
        };
        v.push_back({"cf2-4gen", 2, 1.0, 1.15, {1.149576, 5.5e-6}, 0.0, cf4});
        v.push_back({"cf2-lattice", 2, 1.0, 1.86, {1.853, 4.2e-3}, 100.0, [](double R) {
                         return cf_system(2, CfGenerators::full_lattice, {}, R);
                     }});
        v.push_back({"cf2-gauss-primes", 2, 1.0, 1.515, {1.510, 4.0e-3}, 100.0, [](double R) {
                         return cf_system(2, CfGenerators::gaussian_primes, {}, R);
                     }});
        auto cf5 = [](double) {
            SystemSpec s = cf_system(
                3, CfGenerators::finite_list,
                {Vec(1, 0, 0), Vec(1, 1, 0), Vec(1, -1, 0), Vec(1, 0, 1), Vec(1, 0, -1)});
            s.name = "cf3-5gen";
            return s;
        };
        v.push_back({"cf3-5gen", 3, 1.0, 1.46, {1.452, 9.7e-3}, 0.0, cf5});
        v.push_back({"cf3-lattice", 3, 1.0, 2.6, {2.57, 1.7e-2}, 30.0, [](double R) {
                         return cf_system(3, CfGenerators::full_lattice, {}, R);
                     }});
        v.push_back({"abc", 2, 1.0, 0.633, {0.631822790, 1.4e-8}, 0.0,
                     [](double) { return abc_system(); }});
        v.push_back({"schottky2d", 2, 2.0 - 2.0 / kSqrt3, 0.3, {0.295546, 6.3e-6}, 0.0,
                     [](double) { return schottky2d_system(); }});
        v.push_back({"schottky3d", 3, 1.5 * std::sqrt(2.0) - 1.0, 0.825, {0.823, 1.8e-3}, 0.0,
                     [](double) { return schottky3d_system(); }});
        v.push_back({"apollonian", 2, kSqrt3, 1.306, {1.30563, 2.3e-4}, 400.0, [](double N) {
                         auto s = apollonian_system({1, 2, 3, 4, 5, 6},
                                                    std::max(1, static_cast<int>(N)), false);
                         s.name = "apollonian";
                         return s;
                     }});
        v.push_back({"apollonian-12", 2, kSqrt3, 1.115, {1.11405706, 9.2e-6}, 0.0, [](double) {
                         auto s = apollonian_system({1, 2, 3, 4, 5, 6}, 2, true);
                         s.name = "apollonian-12";
                         return s;
                     }});
        v.push_back({"apollonian-odd", 2, kSqrt3, 1.08, {1.07281, 1.2e-4}, 1500.0, [](double N) {
                         auto s = apollonian_system({1, 3, 5}, std::max(1, static_cast<int>(N)),
                                                    false);
                         s.name = "apollonian-odd";
                         return s;
                     }});
        return v;
    }();
    return entries;
}

const CatalogEntry* find_catalog(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return &e;
    return nullptr;
}

} // namespace dimcert
