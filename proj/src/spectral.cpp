#include "dimcert/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "dimcert/parallel.hpp"

namespace dimcert {

namespace {
constexpr double kFpSlack = 1e-12;
constexpr double kFloor = 1e-300;

// min/max of y_j/w_j
void ratio_range(const std::vector<double>& y, const std::vector<double>& w, double& lo,
                 double& hi) {
    lo = 1e300;
    hi = -1e300;
    for (size_t j = 0; j < y.size(); ++j) {
        double r = y[j] / w[j];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
}
} // namespace

CertifiedRadius power_iterate(const SparseMatrix& m, const PowerOptions& opt) {
    const int64_t n = m.size;
    int max_iter = opt.max_iter > 0
                       ? opt.max_iter
                       : static_cast<int>(std::min<int64_t>(10 * std::max<int64_t>(n, 1), 5000));
    CertifiedRadius out;
    std::vector<double> w(static_cast<size_t>(n), 1.0), y(static_cast<size_t>(n));
    double lo = 0.0, hi = 0.0;
    out.converged = false;
    int it = 0;
    for (; it < max_iter; ++it) {
        transfer_apply(m, w, y);
        ratio_range(y, w, lo, hi);
        if (lo > 0.0 && (hi - lo) <= opt.tol * lo) {
            out.converged = true;
            ++it;
            break;
        }
        double mx = 0.0;
        for (double v : y) mx = std::max(mx, v);
        if (mx <= 0.0) break; // dead operator; all-ones stays the witness
        double inv = 1.0 / mx;
        for (size_t j = 0; j < w.size(); ++j) w[j] = std::max(y[j] * inv, kFloor);
    }
    out.iterations = it;
    out.witness = std::move(w);
    out.lo = lo;
    out.hi = hi;
    return out;
}

CertifiedRadius certify_bounds(const SparseMatrix& m, const std::vector<double>& w) {
    for (double v : w)
        if (!(v > 0.0)) throw PositivityError("certify_bounds: witness must be strictly positive");
    std::vector<double> y(w.size());
    transfer_apply(m, w, y);
    CertifiedRadius c;
    ratio_range(y, w, c.lo, c.hi);
    c.lo *= (1.0 - kFpSlack);
    c.hi *= (1.0 + kFpSlack);
    c.witness = w;
    return c;
}

CertifiedRadius spectral_radius_interval(const SparseMatrix& m, double tol, int max_iter) {
    PowerOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    CertifiedRadius p = power_iterate(m, opt);
    CertifiedRadius c = certify_bounds(m, p.witness);
    c.iterations = p.iterations;
    c.converged = p.converged && (c.hi - c.lo) <= tol * std::max(c.lo, 1e-300);
    return c;
}

} // namespace dimcert
