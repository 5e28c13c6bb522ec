#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace dimcert {

/// Euclidean point/vector in R^n, n in {2,3}. Coordinates beyond n are kept at zero
/// so norms and dot products can run over all three slots unconditionally.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    Vec() = default;
    Vec(double x, double y) : c{x, y, 0.0} {}
    Vec(double x, double y, double z) : c{x, y, z} {}

    double& operator[](int i) { return c[static_cast<size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<size_t>(i)]; }

    Vec operator+(const Vec& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
    Vec operator-(const Vec& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]}; }
    Vec operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s}; }
    Vec& operator+=(const Vec& o) {
        c[0] += o.c[0];
        c[1] += o.c[1];
        c[2] += o.c[2];
        return *this;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    return a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2];
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline Vec from_complex(std::complex<double> z) { return {z.real(), z.imag()}; }
inline std::complex<double> to_complex(const Vec& v) { return {v.c[0], v.c[1]}; }

using cplx = std::complex<double>;

/// 2x2 complex matrix acting as a Moebius transformation z -> (az+b)/(cz+d).
struct Mat2c {
    cplx a{1.0}, b{0.0}, cc{0.0}, d{1.0};

    cplx det() const { return a * d - b * cc; }

    Mat2c operator*(const Mat2c& o) const {
        return {a * o.a + b * o.cc, a * o.b + b * o.d, cc * o.a + d * o.cc, cc * o.b + d * o.d};
    }
};

inline Mat2c conj(const Mat2c& m) {
    return {std::conj(m.a), std::conj(m.b), std::conj(m.cc), std::conj(m.d)};
}

/// n x n real matrix, stored dense for n <= 3. Identity by default.
struct Mat3 {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double& operator()(int i, int j) { return m[static_cast<size_t>(3 * i + j)]; }
    double operator()(int i, int j) const { return m[static_cast<size_t>(3 * i + j)]; }

    Vec apply(const Vec& v) const {
        return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
                m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
                m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
    }
};

} // namespace dimcert
