#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dimcert/errors.hpp"

namespace dimcert {

/// Every certified constant a run needs, with the inputs that produced it.
/// err_max < 1 is a hard gate before any matrix is assembled.
struct ErrorBudget {
    double C_BH = 0.0;
    double C1 = 0.0;      ///< first-derivative (Lipschitz) constant
    double C2 = 0.0;      ///< second-derivative constant
    double eta = 0.0;     ///< dist(X, boundary of W) actually used
    double err_max = 0.0; ///< max over simplices of the interpolation factor
    double t_upper_used = 0.0;
};

/// One line of the constants audit trail kept in the result record.
struct ConstantAudit {
    std::string name;
    double value = 0.0;
    std::string inputs;
};

/// Piecewise-linear interpolation constant of the explicit Bramble-Hilbert
/// bound, specialized to the uniform norm: 3*sqrt(6) in 2D, 6*sqrt(15) in 3D.
double bramble_hilbert_constant(int n);

/// The sum over |beta| = 2 of (beta!)^-2; 3/2 in 2D, 15/4 in 3D.
double bh_factorial_sum(int n);

/// Eigenfunction derivative bound for systems of Moebius maps:
/// minimizes  alpha! * (sqrt(n)/(u*eta))^order * (1 - s(2+s))^-t_upper
/// over 0 < u < s < sqrt(2)-1, with alpha! = 2 for order 2 (pure second
/// partials dominate), 1 otherwise. Any feasible point is a valid bound, so
/// the optimizer only has to find a good one; the result is rounded UP to 4
/// significant digits.
double derivative_constant_mobius(int n, double t_upper, double eta, int order);

/// Same quantity without the alpha!*(sqrt n / eta)^order prefactor — the form
/// tabulated per example in the source analysis; used by the reproduction
/// checks.
double mobius_min_core(double t_upper, int order);

/// Derivative bound for general conformal systems in the plane:
/// minimizes  alpha! * (M*L/(s*eta))^order * exp(t * C_r * (L/(L-2))^2),
/// C_r = log((1+r*eta)^3 / (1-r*eta)^5), over r in (0, 1/eta), s in (0, r),
/// M > 1, L > 2. Pass s_fixed to pin s = r (a published parameter choice).
double derivative_constant_analytic2d(double t_upper, double eta, int order,
                                      std::optional<double> s_fixed = std::nullopt);

/// err_tau = 2 * C_BH * (C1 h + 1) * C2 h^2, with an upward rounding pad.
/// ErrTooLarge when the result reaches 1: the mesh is too coarse to certify.
double interpolation_error_factor(double h_tau, double C1, double C2, double C_BH);

/// Truncation remainder for lattice inversion families: everything with
/// |e| >= R+2 is dominated by (omega_{n-1}/2) * C1 * R^(n-2t)/(2t-n).
/// RangeError when t <= n/2 (the tail diverges).
double tail_constant_cf(int n, double t, double R, double C1);

/// Truncation remainder for the gasket families:
/// k_count * 4^t * N^(1-2t) / (2t-1).  RangeError when t <= 1/2.
double tail_constant_apollonian(double t, int N, int k_count);

} // namespace dimcert
