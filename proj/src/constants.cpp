#include "dimcert/constants.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <functional>

namespace dimcert {

namespace {

constexpr double kSqrt2m1 = 0.41421356237309503;
constexpr double kGoldenR = 0.6180339887498949;

double round_up_sig(double x, int digits) {
    if (x <= 0.0 || !std::isfinite(x)) return x;
    double e = std::floor(std::log10(x));
    double mag = std::pow(10.0, digits - 1 - e);
    double r = std::ceil(x * mag) / mag;
    while (r < x) r = std::nextafter(r, DBL_MAX);
    return r;
}

// Golden-section minimum of a unimodal-ish f on [a, b] after a coarse scan.
double scan_golden_min(const std::function<double(double)>& f, double a, double b, int grid,
                       int refine, double* argmin = nullptr) {
    double best = 1e300, bx = a;
    for (int i = 0; i <= grid; ++i) {
        double x = a + (b - a) * i / grid;
        double v = f(x);
        if (v < best) {
            best = v;
            bx = x;
        }
    }
    double lo = std::max(a, bx - (b - a) / grid);
    double hi = std::min(b, bx + (b - a) / grid);
    double x1 = hi - kGoldenR * (hi - lo), x2 = lo + kGoldenR * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < refine; ++i) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - kGoldenR * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + kGoldenR * (hi - lo);
            f2 = f(x2);
        }
    }
    double v = std::min(std::min(f1, f2), best);
    if (argmin) *argmin = (f1 < f2) ? x1 : x2;
    return v;
}

} // namespace

double bh_factorial_sum(int n) {
    if (n == 2) return 1.5;
    if (n == 3) return 3.75;
    throw UnsupportedDimension("bh_factorial_sum: n must be 2 or 3");
}

double bramble_hilbert_constant(int n) {
    if (n == 2) return 3.0 * std::sqrt(6.0);
    if (n == 3) return 6.0 * std::sqrt(15.0);
    throw UnsupportedDimension("bramble_hilbert_constant: n must be 2 or 3");
}

double mobius_min_core(double t_upper, int order) {
    auto f = [&](double s) {
        double g = 1.0 - s * (2.0 + s);
        if (g <= 0.0) return 1e300;
        return std::pow(s, -order) * std::pow(g, -t_upper);
    };
    double v = scan_golden_min(f, 1e-6, kSqrt2m1 - 1e-12, 400, 120);
    return round_up_sig(v, 6);
}

double derivative_constant_mobius(int n, double t_upper, double eta, int order) {
    if (order == 0) return 1.0;
    double fact = (order >= 2) ? 2.0 : 1.0;
    // u < s strictly; the infimum is the u = s limit, approached by a hair.
    const double shave = 1.0 + 1e-9;
    auto f = [&](double s) {
        double g = 1.0 - s * (2.0 + s);
        if (g <= 0.0 || s <= 0.0) return 1e300;
        double u = s / shave;
        return fact * std::pow(std::sqrt(static_cast<double>(n)) / (u * eta), order) *
               std::pow(g, -t_upper);
    };
    double v = scan_golden_min(f, 1e-6, kSqrt2m1 - 1e-12, 400, 120);
    return round_up_sig(v, 4);
}

double derivative_constant_analytic2d(double t_upper, double eta, int order,
                                      std::optional<double> s_fixed) {
    const double rmax = std::min(1.0, 1.0 / eta) * (1.0 - 1e-9);
    const double M = 1.0 + 1e-9;
    auto cr = [&](double r) {
        double re = r * eta;
        return std::log((1.0 + re) * (1.0 + re) * (1.0 + re) /
                        ((1.0 - re) * (1.0 - re) * (1.0 - re) * (1.0 - re) * (1.0 - re)));
    };
    auto val = [&](double r, double s, double L) {
        if (!(r > 0 && r < 1.0 / eta && s > 0 && s <= r && L > 2.0)) return 1e300;
        double k = L / (L - 2.0);
        double e = std::exp(t_upper * cr(r) * k * k);
        if (order == 0) return e;
        return ((order >= 2) ? 2.0 : 1.0) * std::pow(M * L / (s * eta), order) * e;
    };
    auto min_over_L = [&](double r, double s) {
        auto g = [&](double u) { return val(r, s, 2.0 + std::exp(u)); }; // L = 2 + e^u
        return scan_golden_min(g, std::log(1e-3), std::log(1e4), 160, 90);
    };

    double best;
    if (s_fixed) {
        double s = *s_fixed;
        double r = std::min(s * (1.0 + 1e-9), rmax);
        best = min_over_L(r, std::min(s, r));
    } else {
        auto g = [&](double u) { // r = e^u, s pinned just under r
            double r = std::exp(u);
            return min_over_L(r, r * (1.0 - 1e-9));
        };
        best = scan_golden_min(g, std::log(1e-6), std::log(rmax), 140, 80);
    }
    return round_up_sig(best, 4);
}

double interpolation_error_factor(double h_tau, double C1, double C2, double C_BH) {
    if (h_tau < 0 || C1 <= 0 || C2 <= 0 || C_BH <= 0)
        throw RangeError("interpolation_error_factor: inputs must be positive");
    double e = 2.0 * C_BH * (C1 * h_tau + 1.0) * C2 * h_tau * h_tau * (1.0 + 1e-13);
    if (e >= 1.0)
        throw ErrTooLarge("interpolation_error_factor: err = " + std::to_string(e) +
                          " >= 1; refine the mesh");
    return e;
}

double tail_constant_cf(int n, double t, double R, double C1) {
    if (n != 2 && n != 3) throw UnsupportedDimension("tail_constant_cf: n must be 2 or 3");
    if (t <= n / 2.0)
        throw RangeError("tail_constant_cf: t <= n/2, tail diverges");
    if (R < 1.0) throw RangeError("tail_constant_cf: R must be >= 1");
    double omega = (n == 2) ? 2.0 * M_PI : 4.0 * M_PI;
    double v = 0.5 * omega * C1 * std::pow(R, n - 2.0 * t) / (2.0 * t - n);
    return v * (1.0 + 1e-13);
}

double tail_constant_apollonian(double t, int N, int k_count) {
    if (t <= 0.5) throw RangeError("tail_constant_apollonian: t <= 1/2, tail diverges");
    if (N < 1) throw RangeError("tail_constant_apollonian: N must be >= 1");
    double v = k_count * std::pow(4.0, t) * std::pow(static_cast<double>(N), 1.0 - 2.0 * t) /
               (2.0 * t - 1.0);
    return v * (1.0 + 1e-13);
}

} // namespace dimcert
