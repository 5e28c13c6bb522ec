#pragma once

#include "dimcert/sparse.hpp"

namespace dimcert {

/// Two-sided spectral radius certificate for a non-negative matrix: with any
/// strictly positive witness w,
///     min_j act(M,w)_j / w_j  <=  r(M)  <=  max_j act(M,w)_j / w_j.
/// Witness quality controls tightness only, never validity.
struct CertifiedRadius {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> witness;
    int iterations = 0;
    bool converged = true;
};

struct PowerOptions {
    double tol = 1e-8;    ///< relative ratio spread at which to stop
    int max_iter = 0;     ///< 0 = min(10 N, 5000)
};

/// Power iteration from the all-ones vector, renormalized to max entry 1 each
/// step, entries floored at 1e-300 to preserve strict positivity. Returns the
/// last iterate with converged=false instead of failing: the certificate built
/// from it stays valid, just loose.
CertifiedRadius power_iterate(const SparseMatrix& m, const PowerOptions& opt = {});

/// The two-sided bound above with directed 1e-12 slack on each end.
/// PositivityError if any witness entry is <= 0.
CertifiedRadius certify_bounds(const SparseMatrix& m, const std::vector<double>& w);

/// power_iterate followed by certify_bounds.
CertifiedRadius spectral_radius_interval(const SparseMatrix& m, double tol, int max_iter = 0);

} // namespace dimcert
