#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dimcert/gdms.hpp"

namespace dimcert {

/// Exact image ball of a ball under one conformal map (three-point circle
/// construction for inversions, direct scaling for affine maps); sampled hull
/// for composites. Shared by the validator, the mesh-ball inflation and the
/// figure writer.
struct BallImage {
    Vec center;
    double radius = 0.0;
};
BallImage image_ball(const ConformalMap& f, const Region& src, int n, uint64_t seed = 7);

enum class CfGenerators { finite_list, full_lattice, gaussian_primes };

/// Inversion family phi_e(x) = (x+e)/|x+e|^2 on the ball of diameter [0, e1].
/// finite_list uses `generators`; the lattice kinds enumerate e1 >= 1,
/// |e| <= R+2 (the analytic tail picks up everything from |e| >= R+2).
SystemSpec cf_system(int n, CfGenerators kind, const std::vector<Vec>& generators = {},
                     double R = 0.0);

/// Gaussian prime test on a+bi (unit-free characterization).
bool is_gaussian_prime(int64_t a, int64_t b);

/// Three quadratic perturbations of linear maps on B(0, 0.2).
SystemSpec abc_system();

/// Three reflection disks of radius 1/sqrt(3), six edge maps.
SystemSpec schottky2d_system();

/// Four inversion spheres of radius 1/2 on a tetrahedron, twelve edge maps.
SystemSpec schottky3d_system();

/// Gasket generators Phi_{k,n} as explicit 2x2 matrix products, k in k_set,
/// n = 1..n_max. Infinite subsystems carry the geometric tail over n > n_max.
SystemSpec apollonian_system(const std::vector<int>& k_set, int n_max, bool finite_family);

/// Contracting similarities x -> r_i (x - c_i) + c_i inside the unit ball.
/// OverlapError when two image balls intersect.
SystemSpec similitude_system(const std::vector<double>& ratios, const std::vector<Vec>& centers,
                             int n = 2);

/// Region each sub-mesh must cover so that every image of every node stays
/// locatable: an off-center invariant ball for the inversion families, the
/// plain delta-enlargement where the maps contract well clear of the boundary,
/// and a fixed-point inflation driven by exact image balls for the gasket.
std::vector<Region> mesh_balls_for(const SystemSpec& spec, double delta);

struct CatalogEntry {
    std::string name;
    int n = 2;
    double eta = 1.0;
    double t_upper = 1.0;                      ///< derivative constants evaluated here
    std::pair<double, double> table_interval;  ///< published central value +/- radius
    double default_truncation = 0.0;
    std::function<SystemSpec(double truncation)> build;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry* find_catalog(const std::string& name);

} // namespace dimcert
