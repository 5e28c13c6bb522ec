#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "dimcert/assembly.hpp"
#include "dimcert/spectral.hpp"

namespace dimcert {

/// One t-evaluation of the bracketing pair: certified radius intervals for
/// both matrices and the two certification verdicts.
struct EvalPoint {
    double t = 0.0;
    double lo_A = 0.0, hi_A = 0.0;
    double lo_B = 0.0, hi_B = 0.0;
    bool cond_lower = false; ///< lo_A > 1: t certifies as a lower bound
    bool cond_upper = false; ///< hi_B < 1: t certifies as an upper bound
    int power_iters = 0;
};

/// Rigorous two-sided dimension bound with everything needed to re-check it.
struct CertifiedInterval {
    double t_lo = 0.0;
    double t_hi = 0.0;
    CertifiedRadius evidence_lo; ///< radius certificate of A at t_lo (lo > 1)
    CertifiedRadius evidence_hi; ///< radius certificate of B at t_hi (hi < 1)
    double h_max = 0.0;
    double err = 0.0;
    double truncation = 0.0;
    double wall_time_s = 0.0;
    bool mesh_limited = false; ///< width goal unreachable at this err
    std::vector<EvalPoint> trace;
};

/// Bundle handed to the bracketing driver. tail_for(t) produces the
/// truncation bound at parameter t, or nullopt for finite alphabets.
struct SolverSetup {
    const SystemSpec* system = nullptr;
    const Mesh* mesh = nullptr;
    ErrorBudget budget;
    const AssemblyCache* cache = nullptr;
    std::function<std::optional<TailBound>(double)> tail_for;
    double tol_spectral = 1e-8;
    int max_power_iter = 0;
    int max_evals = 60;
    AssemblyOptions assembly;
};

/// Evaluates both certificates at t (one assembly, shared witness work).
EvalPoint evaluate_at(const SolverSetup& setup, double t);

/// True plus the radius certificate of A_t when its certified lower bound
/// exceeds 1, i.e. t is a valid lower dimension bound.
std::pair<bool, CertifiedRadius> certify_lower(const SolverSetup& setup, double t);

/// Dual check on B_t (tail included): certified upper bound below 1.
std::pair<bool, CertifiedRadius> certify_upper(const SolverSetup& setup, double t);

/// Secant/bisection hunt for the tightest certified pair. t_init must
/// straddle the dimension. Returns the interval flagged mesh_limited when the
/// width goal sits below what the interpolation error permits; BracketFailure
/// after max_evals evaluations without a certified pair.
CertifiedInterval bracket_dimension(const SolverSetup& setup, double width_goal,
                                    std::pair<double, double> t_init);

} // namespace dimcert
