#pragma once

#include "dimcert/vec.hpp"

namespace dimcert {

/// Closed ball region attached to a graph vertex. A system stores two balls per
/// vertex: the compact set the maps act on and the larger open set the maps
/// extend to conformally.
struct Region {
    Vec center;
    double radius = 1.0;
    int vertex_id = 0;

    bool contains(const Vec& x, double tol = 0.0) const {
        return norm(x - center) <= radius + tol;
    }
    double signed_dist(const Vec& x) const { return norm(x - center) - radius; }
};

} // namespace dimcert
