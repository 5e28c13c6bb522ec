#pragma once

#include <memory>
#include <vector>

#include "dimcert/errors.hpp"
#include "dimcert/vec.hpp"

namespace dimcert {

/// Denominators below this magnitude (map-local coordinates) raise PoleError.
/// Absolute threshold; override per call site if a system needs another scale.
inline constexpr double kPoleGuard = 1e-14;

enum class MapKind {
    moebius2d,    ///< z -> (az+b)/(cz+d), optionally precomposed with conjugation
    mobius_nd,    ///< x -> b + s * O * inv^eps(x - a),  inv(y) = y/|y|^2
    polynomial2d, ///< z -> a z + b + c z^2
    composite,    ///< ordered composition of the above
};

/// One edge map of a conformal graph-directed system. Closed set of kinds: the
/// derivative operator norm must come from an exact formula per kind, never
/// from numerical differentiation, or the certificates downstream mean nothing.
/// Extension point: add a kind here plus its three switch arms (apply,
/// derivative_norm, compose) and the validator picks it up unchanged.
struct ConformalMap {
    MapKind kind = MapKind::mobius_nd;
    int source_vertex = 0; ///< vertex whose region is the domain
    int target_vertex = 0; ///< vertex whose region receives the image

    // moebius2d
    Mat2c mat;
    bool conjugate_flag = false;

    // mobius_nd: x -> post_translate + scale * orthogonal * inv^eps(x - pre_translate)
    Vec pre_translate;
    Vec post_translate;
    double scale = 1.0;
    Mat3 orthogonal;
    bool invert = false;

    // polynomial2d coefficients
    cplx pa{0.0}, pb{0.0}, pc{0.0};

    // composite: maps applied right to left (last entry acts first)
    std::vector<ConformalMap> parts;
};

ConformalMap make_moebius2d(const Mat2c& m, bool conjugate, int src = 0, int tgt = 0);
ConformalMap make_mobius_nd(const Vec& pre, const Vec& post, double scale, const Mat3& orth,
                            bool invert, int src = 0, int tgt = 0);
ConformalMap make_polynomial2d(cplx a, cplx b, cplx c, int src = 0, int tgt = 0);
ConformalMap make_similitude(double ratio, const Vec& center, int src = 0, int tgt = 0);

/// phi_e(x). PoleError when a denominator magnitude falls below the guard.
Vec apply(const ConformalMap& map, const Vec& x);

/// Operator norm of the derivative at x, by the exact per-kind formula:
/// |det M|/|cz+d|^2 (Moebius), scale/|x-a|^2 (inversion composite), |a+2cz|
/// (quadratic). Compositions use the chain rule.
double derivative_norm(const ConformalMap& map, const Vec& x);

/// Both at once; the hot path in matrix assembly.
void apply_and_norm(const ConformalMap& map, const Vec& x, Vec& image, double& dnorm);

/// Composition phi = maps[0] o maps[1] o ... (rightmost acts first).
/// Moebius pairs collapse to a matrix product; anything else becomes a
/// composite closure. IncidenceError if interior vertices mismatch.
ConformalMap compose(const std::vector<ConformalMap>& maps);

} // namespace dimcert
