#include "dimcert/gdms.hpp"

#include <algorithm>
#include <cmath>

#include "dimcert/sampling.hpp"
#include "dimcert/systems.hpp"

namespace dimcert {

namespace {
constexpr double kGolden = 0.6180339887498949;
}

std::vector<Vec> ball_samples(const Region& r, int n, int count, uint64_t seed) {
    std::vector<Vec> out;
    out.reserve(2 * static_cast<size_t>(count));
    double phase = static_cast<double>(seed % 1000) / 1000.0;
    for (int i = 0; i < count; ++i) {
        double u = (i + 0.5) / count;
        if (n == 2) {
            double rho = r.radius * std::sqrt(u);
            double ang = 2.0 * M_PI * std::fmod(phase + kGolden * i, 1.0);
            out.push_back(r.center + Vec{rho * std::cos(ang), rho * std::sin(ang)});
        } else {
            double rho = r.radius * std::cbrt(u);
            double z = 1.0 - 2.0 * std::fmod(phase + kGolden * i, 1.0);
            double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ang = 2.0 * M_PI * std::fmod(0.5 * phase + (kGolden * kGolden) * i, 1.0);
            out.push_back(r.center + Vec{rho * s * std::cos(ang), rho * s * std::sin(ang), rho * z});
        }
    }
    for (int i = 0; i < count; ++i) {
        if (n == 2) {
            double ang = 2.0 * M_PI * (i + 0.25 + phase) / count;
            out.push_back(r.center + Vec{r.radius * std::cos(ang), r.radius * std::sin(ang)});
        } else {
            double z = 1.0 - 2.0 * (i + 0.5) / count;
            double s = std::sqrt(std::max(0.0, 1.0 - z * z));
            double ang = 2.0 * M_PI * std::fmod(phase + kGolden * i, 1.0);
            out.push_back(r.center + Vec{r.radius * s * std::cos(ang), r.radius * s * std::sin(ang),
                                         r.radius * z});
        }
    }
    return out;
}

ValidationReport validate_system(const SystemSpec& spec, int samples_per_region, uint64_t seed) {
    ValidationReport rep;
    const int n = spec.n;
    const auto& maps = spec.alphabet.maps;

    // 1. Every map sends its source X-region into its target X-region.
    {
        CheckResult c;
        c.name = "maps_into_target_region";
        double worst = 1e300;
        for (const auto& f : maps) {
            const Region& src = spec.x_regions[static_cast<size_t>(f.source_vertex)];
            const Region& tgt = spec.x_regions[static_cast<size_t>(f.target_vertex)];
            for (const auto& p : ball_samples(src, n, samples_per_region, seed)) {
                double m = tgt.radius - norm(apply(f, p) - tgt.center);
                worst = std::min(worst, m);
            }
        }
        c.margin = worst;
        c.pass = worst >= -1e-10;
        rep.checks.push_back(c);
    }

    // 2. Open set condition on exact/sampled image balls; tangencies are legal.
    {
        CheckResult c;
        c.name = "osc_image_separation";
        double worst = 1e300;
        size_t cap = std::min<size_t>(maps.size(), 400); // quadratic guard
        std::vector<BallImage> balls(cap);
        for (size_t i = 0; i < cap; ++i)
            balls[i] =
                image_ball(maps[i], spec.x_regions[static_cast<size_t>(maps[i].source_vertex)], n, seed);
        for (size_t i = 0; i < cap; ++i)
            for (size_t j = i + 1; j < cap; ++j) {
                if (maps[i].target_vertex != maps[j].target_vertex) continue;
                double m = norm(balls[i].center - balls[j].center) - balls[i].radius - balls[j].radius;
                worst = std::min(worst, m);
            }
        if (worst == 1e300) worst = 0.0;
        c.margin = worst;
        c.pass = worst >= -1e-9;
        rep.checks.push_back(c);
    }

    // 3. Contraction on the extension domains; two-letter words for lattice
    //    families, whose unit generator only contracts after composition.
    {
        CheckResult c;
        c.name = "contraction_on_W";
        bool two_letter = spec.alphabet.kind == Alphabet::Kind::lattice_cf ||
                          spec.alphabet.kind == Alphabet::Kind::gaussian_primes;
        double worst_norm = 0.0;
        if (!two_letter) {
            for (const auto& f : maps) {
                const Region& w = spec.w_regions[static_cast<size_t>(f.source_vertex)];
                const Region& x = spec.x_regions[static_cast<size_t>(f.source_vertex)];
                Region probe{x.center, 0.5 * (x.radius + w.radius), x.vertex_id};
                for (const auto& p : ball_samples(probe, n, samples_per_region, seed))
                    worst_norm = std::max(worst_norm, derivative_norm(f, p));
            }
        } else {
            size_t cap = std::min<size_t>(maps.size(), 64);
            const Region& x = spec.x_regions[0];
            const Region& w = spec.w_regions[0];
            Region probe{x.center, 0.5 * (x.radius + w.radius), x.vertex_id};
            auto pts = ball_samples(probe, n, std::max(10, samples_per_region / 10), seed);
            for (size_t i = 0; i < cap; ++i)
                for (size_t j = 0; j < cap; ++j) {
                    auto comp = compose({maps[i], maps[j]});
                    for (const auto& p : pts)
                        worst_norm = std::max(worst_norm, derivative_norm(comp, p));
                }
        }
        c.margin = 1.0 - worst_norm;
        c.pass = worst_norm < 1.0;
        c.detail = two_letter ? "length-2 words" : "single letters";
        rep.checks.push_back(c);
    }

    return rep;
}

double hutchinson_dimension(const std::vector<double>& ratios) {
    auto f = [&](double t) {
        double s = 0.0;
        for (double r : ratios) s += std::pow(r, t);
        return s - 1.0;
    };
    double lo = 0.0, hi = 1.0;
    while (f(hi) > 0.0 && hi < 1e4) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace dimcert
