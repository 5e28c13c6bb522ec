#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimcert/conformal_map.hpp"
#include "dimcert/region.hpp"

namespace dimcert {

/// Analytic bound on everything dropped by truncating an infinite alphabet.
struct TailDescriptor {
    enum class Kind { cf_integral, apollonian_geometric };
    Kind kind = Kind::cf_integral;
    int n = 2;            ///< ambient dimension (cf_integral)
    int k_count = 6;      ///< generator families kept (apollonian)
    double admissible_above() const { return kind == Kind::cf_integral ? n / 2.0 : 0.5; }
};

/// Edge list of the system. Infinite families are stored already truncated,
/// with the descriptor carrying what the truncation left out.
struct Alphabet {
    enum class Kind { finite, lattice_cf, gaussian_primes, apollonian };
    Kind kind = Kind::finite;
    std::vector<ConformalMap> maps;
    double truncation = 0.0; ///< R for lattice kinds, N for apollonian; 0 = finite
    std::optional<TailDescriptor> tail;
};

struct SystemSpec {
    int n = 2;
    std::string name;
    std::vector<Region> x_regions; ///< one per vertex, index = vertex id
    std::vector<Region> w_regions; ///< conformal extension domains, same order
    std::vector<Region> mesh_balls; ///< region each mesh must cover; invariant under all maps
    Alphabet alphabet;
    double eta = 1.0;              ///< min over vertices of dist(X_v, boundary of W_v)
    bool moebius_only = true;      ///< selects which eigenfunction derivative bound applies

    const std::vector<ConformalMap>& maps() const { return alphabet.maps; }
};

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0; ///< worst-case slack; negative means violated
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Numerical spot-checks of the system axioms: images stay inside target
/// regions, sampled open-set separation, contraction on the extension domains
/// (length-2 words when single letters are allowed to have unit norm).
/// Low-discrepancy boundary+interior sampling; report-only, never throws.
ValidationReport validate_system(const SystemSpec& spec, int samples_per_region,
                                 uint64_t seed = 12345);

/// Unique t >= 0 with sum r_i^t = 1, bisected to 1e-14. Ratio lists from
/// similitude systems make this the reference value for the whole pipeline.
double hutchinson_dimension(const std::vector<double>& ratios);

} // namespace dimcert
