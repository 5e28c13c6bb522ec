#include "dimcert/conformal_map.hpp"

#include <cmath>

namespace dimcert {

ConformalMap make_moebius2d(const Mat2c& m, bool conjugate, int src, int tgt) {
    ConformalMap f;
    f.kind = MapKind::moebius2d;
    f.mat = m;
    f.conjugate_flag = conjugate;
    f.source_vertex = src;
    f.target_vertex = tgt;
    if (std::abs(m.det()) == 0.0) throw DomainError("moebius2d: singular matrix");
    return f;
}

ConformalMap make_mobius_nd(const Vec& pre, const Vec& post, double scale, const Mat3& orth,
                            bool invert, int src, int tgt) {
    ConformalMap f;
    f.kind = MapKind::mobius_nd;
    f.pre_translate = pre;
    f.post_translate = post;
    f.scale = scale;
    f.orthogonal = orth;
    f.invert = invert;
    f.source_vertex = src;
    f.target_vertex = tgt;
    return f;
}

ConformalMap make_polynomial2d(cplx a, cplx b, cplx c, int src, int tgt) {
    ConformalMap f;
    f.kind = MapKind::polynomial2d;
    f.pa = a;
    f.pb = b;
    f.pc = c;
    f.source_vertex = src;
    f.target_vertex = tgt;
    return f;
}

ConformalMap make_similitude(double ratio, const Vec& center, int src, int tgt) {
    // x -> ratio*(x - c) + c
    return make_mobius_nd(center, center, ratio, Mat3{}, false, src, tgt);
}

namespace {

inline cplx moebius_point(const Mat2c& m, bool conj_flag, cplx z) {
    if (conj_flag) z = std::conj(z);
    cplx den = m.cc * z + m.d;
    if (std::abs(den) < kPoleGuard) throw PoleError("moebius2d: |cz+d| below pole guard");
    return (m.a * z + m.b) / den;
}

} // namespace

Vec apply(const ConformalMap& map, const Vec& x) {
    switch (map.kind) {
    case MapKind::moebius2d:
        return from_complex(moebius_point(map.mat, map.conjugate_flag, to_complex(x)));
    case MapKind::mobius_nd: {
        Vec y = x - map.pre_translate;
        if (map.invert) {
            double q = norm2(y);
            if (q < kPoleGuard * kPoleGuard) throw PoleError("mobius_nd: inversion at center");
            y = y * (1.0 / q);
        }
        return map.post_translate + map.orthogonal.apply(y) * map.scale;
    }
    case MapKind::polynomial2d: {
        cplx z = to_complex(x);
        return from_complex(map.pa * z + map.pb + map.pc * z * z);
    }
    case MapKind::composite: {
        Vec y = x;
        for (auto it = map.parts.rbegin(); it != map.parts.rend(); ++it) y = apply(*it, y);
        return y;
    }
    }
    throw DomainError("apply: unknown map kind");
}

double derivative_norm(const ConformalMap& map, const Vec& x) {
    switch (map.kind) {
    case MapKind::moebius2d: {
        cplx z = to_complex(x);
        if (map.conjugate_flag) z = std::conj(z);
        double den = std::norm(map.mat.cc * z + map.mat.d);
        if (den < kPoleGuard * kPoleGuard) throw PoleError("moebius2d: derivative at pole");
        return std::abs(map.mat.det()) / den;
    }
    case MapKind::mobius_nd: {
        if (!map.invert) return map.scale;
        double q = norm2(x - map.pre_translate);
        if (q < kPoleGuard * kPoleGuard) throw PoleError("mobius_nd: derivative at center");
        return map.scale / q;
    }
    case MapKind::polynomial2d: {
        cplx z = to_complex(x);
        return std::abs(map.pa + 2.0 * map.pc * z);
    }
    case MapKind::composite: {
        double d = 1.0;
        Vec y = x;
        for (auto it = map.parts.rbegin(); it != map.parts.rend(); ++it) {
            d *= derivative_norm(*it, y);
            y = apply(*it, y);
        }
        return d;
    }
    }
    throw DomainError("derivative_norm: unknown map kind");
}

void apply_and_norm(const ConformalMap& map, const Vec& x, Vec& image, double& dnorm) {
    switch (map.kind) {
    case MapKind::moebius2d: {
        cplx z = to_complex(x);
        if (map.conjugate_flag) z = std::conj(z);
        cplx den = map.mat.cc * z + map.mat.d;
        double dq = std::norm(den);
        if (dq < kPoleGuard * kPoleGuard) throw PoleError("moebius2d: |cz+d| below pole guard");
        image = from_complex((map.mat.a * z + map.mat.b) / den);
        dnorm = std::abs(map.mat.det()) / dq;
        return;
    }
    case MapKind::mobius_nd: {
        Vec y = x - map.pre_translate;
        if (map.invert) {
            double q = norm2(y);
            if (q < kPoleGuard * kPoleGuard) throw PoleError("mobius_nd: inversion at center");
            y = y * (1.0 / q);
            dnorm = map.scale / q;
        } else {
            dnorm = map.scale;
        }
        image = map.post_translate + map.orthogonal.apply(y) * map.scale;
        return;
    }
    default:
        image = apply(map, x);
        dnorm = derivative_norm(map, x);
        return;
    }
}

ConformalMap compose(const std::vector<ConformalMap>& maps) {
    if (maps.empty()) throw IncidenceError("compose: empty map list");
    for (size_t i = 0; i + 1 < maps.size(); ++i) {
        if (maps[i].source_vertex != maps[i + 1].target_vertex)
            throw IncidenceError("compose: vertex mismatch between consecutive maps");
    }
    bool all_moebius = true;
    for (const auto& m : maps)
        if (m.kind != MapKind::moebius2d) all_moebius = false;

    if (all_moebius) {
        // (M1,c1) o (M2,c2) = (M1 * (c1 ? conj(M2) : M2), c1 xor c2)
        Mat2c acc = maps[0].mat;
        bool cflag = maps[0].conjugate_flag;
        for (size_t i = 1; i < maps.size(); ++i) {
            acc = acc * (cflag ? conj(maps[i].mat) : maps[i].mat);
            cflag = cflag != maps[i].conjugate_flag;
        }
        ConformalMap f = make_moebius2d(acc, cflag);
        f.source_vertex = maps.back().source_vertex;
        f.target_vertex = maps.front().target_vertex;
        return f;
    }

    ConformalMap f;
    f.kind = MapKind::composite;
    f.parts = maps;
    f.source_vertex = maps.back().source_vertex;
    f.target_vertex = maps.front().target_vertex;
    return f;
}

} // namespace dimcert
