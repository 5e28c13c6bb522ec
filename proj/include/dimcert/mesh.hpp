#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dimcert/errors.hpp"
#include "dimcert/region.hpp"
#include "dimcert/vec.hpp"

namespace dimcert {

struct BarycentricLocation {
    int64_t simplex_index = -1;
    std::array<double, 4> lambdas{0, 0, 0, 0};
};

/// One structured sub-lattice per vertex region. Cells are squares split into
/// two triangles with alternating diagonals, or cubes split into six
/// tetrahedra along the main diagonal; either way location is lattice
/// arithmetic plus at most a handful of barycentric tests.
struct SubLattice {
    Vec origin;
    double cell = 1.0;
    std::array<int, 3> dims{0, 0, 0};   ///< cells per axis
    std::array<int, 3> ndims{0, 0, 0};  ///< lattice points per axis
    std::vector<int64_t> cell_offset;   ///< per cell: start into cell_simplices (size cells+1)
    std::vector<int32_t> cell_simplices;
    std::vector<int8_t> cell_templates; ///< which template simplex each entry is
    std::vector<int32_t> point_ids;     ///< lattice point -> node id or -1
    bool pure_lattice = true;           ///< no node was moved; analytic barycentric valid
    int64_t node_base = 0;
    int64_t simplex_base = 0;
};

struct Mesh {
    int n = 2;
    std::vector<Vec> nodes;
    std::vector<int32_t> simplices;        ///< (n+1) node ids per simplex
    std::vector<int32_t> region_of_node;
    std::vector<int32_t> region_of_simplex;
    std::vector<double> h_per_simplex;
    double h_max = 0.0;
    double delta_used = 0.0; ///< max node excursion beyond its X region
    std::vector<SubLattice> lattices;      ///< one per vertex region
    bool has_lattice = true;               ///< false for meshes read back from dump

    int64_t node_count() const { return static_cast<int64_t>(nodes.size()); }
    int64_t simplex_count() const {
        return static_cast<int64_t>(simplices.size()) / (n + 1);
    }
    const int32_t* simplex_nodes(int64_t s) const { return simplices.data() + s * (n + 1); }
};

struct MeshStats {
    double h_max = 0.0;
    int64_t node_count = 0;
    int64_t simplex_count = 0;
    double min_quality = 0.0; ///< min inradius/diameter
};

/// Values of a function at mesh nodes; the piecewise linear interpolant is
/// determined by these.
using NodalVector = std::vector<double>;

/// Builds the structured mesh of each region with simplex diameters <= target_h.
/// `cover` holds the ball each sub-mesh must cover (at least the X region,
/// usually a forward-invariant enlargement); nodes that fall outside
/// X_v(delta) are snapped radially onto that sphere. Boundary samples of every
/// X region must locate afterwards or CoverageError is thrown; degenerate
/// snapped simplices throw GeometryError.
Mesh build_mesh(int n, const std::vector<Region>& x_regions, const std::vector<Region>& cover,
                double target_h, double delta);

/// Convenience: cover = X regions enlarged by delta.
Mesh build_mesh(int n, const std::vector<Region>& x_regions, double target_h, double delta);

/// Point location. Ties on shared faces resolve to the lowest simplex index
/// among the candidates of the owning cell; negative barycentrics above
/// -1e-12 are clamped to zero and renormalized. NotFoundError when x lies
/// outside every simplex by more than 1e-10.
BarycentricLocation locate(const Mesh& mesh, const Vec& x, int hint_vertex);

double interpolate(const Mesh& mesh, const NodalVector& v, const BarycentricLocation& loc);

MeshStats mesh_stats(const Mesh& mesh);

/// Plain-text dump, one node per line "v x y [z]", one simplex per line
/// "s i j k [l] region_id". Round-trips bit-exactly.
void dump_mesh(const Mesh& mesh, const std::string& path);
Mesh load_mesh(const std::string& path);

} // namespace dimcert
