#include "dimcert/dim_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace dimcert {

namespace {

struct EvalFull {
    EvalPoint pt;
    CertifiedRadius cert_A;
    CertifiedRadius cert_B;
};

EvalFull evaluate_full(const SolverSetup& setup, double t) {
    TransferMatrices tm =
        assemble(*setup.system, *setup.mesh, t, setup.budget, setup.cache, setup.assembly);
    if (setup.tail_for) {
        auto tail = setup.tail_for(t);
        if (tail) tm = apply_tail_correction(std::move(tm), *tail);
    }
    PowerOptions opt;
    opt.tol = setup.tol_spectral;
    opt.max_iter = setup.max_power_iter;

    EvalFull out;
    // One iteration on A's operator; A and B share eigenvectors unless B
    // carries a tail bump, which then gets its own witness.
    CertifiedRadius pw = power_iterate(tm.A, opt);
    out.cert_A = certify_bounds(tm.A, pw.witness);
    out.cert_A.iterations = pw.iterations;
    out.cert_A.converged = pw.converged;
    if (tm.B.has_bump()) {
        CertifiedRadius pwB = power_iterate(tm.B, opt);
        out.cert_B = certify_bounds(tm.B, pwB.witness);
        out.cert_B.iterations = pwB.iterations;
        out.cert_B.converged = pwB.converged;
    } else {
        out.cert_B = certify_bounds(tm.B, pw.witness);
        out.cert_B.iterations = pw.iterations;
        out.cert_B.converged = pw.converged;
    }
    out.pt.t = t;
    out.pt.lo_A = out.cert_A.lo;
    out.pt.hi_A = out.cert_A.hi;
    out.pt.lo_B = out.cert_B.lo;
    out.pt.hi_B = out.cert_B.hi;
    out.pt.cond_lower = out.cert_A.lo > 1.0;
    out.pt.cond_upper = out.cert_B.hi < 1.0;
    out.pt.power_iters = out.cert_A.iterations;
    return out;
}

} // namespace

EvalPoint evaluate_at(const SolverSetup& setup, double t) { return evaluate_full(setup, t).pt; }

std::pair<bool, CertifiedRadius> certify_lower(const SolverSetup& setup, double t) {
    EvalFull e = evaluate_full(setup, t);
    return {e.pt.cond_lower, e.cert_A};
}

std::pair<bool, CertifiedRadius> certify_upper(const SolverSetup& setup, double t) {
    EvalFull e = evaluate_full(setup, t);
    return {e.pt.cond_upper, e.cert_B};
}

CertifiedInterval bracket_dimension(const SolverSetup& setup, double width_goal,
                                    std::pair<double, double> t_init) {
    auto t0 = std::chrono::steady_clock::now();
    CertifiedInterval out;
    out.h_max = setup.mesh->h_max;
    out.err = setup.budget.err_max;

    double t_min_adm = -1e300;
    if (setup.system->alphabet.tail)
        t_min_adm = setup.system->alphabet.tail->admissible_above() * (1.0 + 1e-9) + 1e-12;

    struct Mark {
        double t = 0.0;
        double val = 0.0; // log of the certified quantity
        bool set = false;
    };
    // lower condition: f_lo(t) = log lo_A(t), decreasing; certified while > 0
    // upper condition: f_up(t) = log hi_B(t), decreasing; certified while < 0
    Mark Llo, Lhi, Ulo, Uhi;
    std::optional<EvalFull> best_lo, best_hi;

    auto note = [&](const EvalFull& e) {
        out.trace.push_back(e.pt);
        double t = e.pt.t;
        if (e.pt.cond_lower) {
            if (!Llo.set || t > Llo.t) {
                Llo = {t, std::log(e.cert_A.lo), true};
                best_lo = e;
            }
        } else if (!Lhi.set || t < Lhi.t) {
            Lhi = {t, std::log(std::max(e.cert_A.lo, 1e-300)), true};
        }
        if (e.pt.cond_upper) {
            if (!Uhi.set || t < Uhi.t) {
                Uhi = {t, std::log(e.cert_B.hi), true};
                best_hi = e;
            }
        } else if (!Ulo.set || t > Ulo.t) {
            Ulo = {t, std::log(e.cert_B.hi), true};
        }
    };

    int evals = 0;
    auto run = [&](double t) {
        t = std::max(t, t_min_adm);
        EvalFull e = evaluate_full(setup, t);
        ++evals;
        note(e);
        return e;
    };

    double ta = std::min(t_init.first, t_init.second);
    double tb = std::max(t_init.first, t_init.second);
    if (ta == tb) tb = ta + std::max(1e-3, 1e-3 * std::abs(ta));
    double range = tb - ta;
    run(ta);
    run(tb);

    // march outward until both conditions appear on their expected sides
    while (evals < setup.max_evals && !Llo.set && ta - range > t_min_adm - range) {
        ta -= range;
        run(ta);
    }
    while (evals < setup.max_evals && !Uhi.set) {
        tb += range;
        run(tb);
        if (tb > ta + 40 * range) break;
    }
    if (!Llo.set || !Uhi.set)
        throw BracketFailure("bracket_dimension: no certified pair after initial sweep");

    auto next_probe = [](const Mark& a, const Mark& b, double target) {
        // secant step on (t, val) aiming val = target, clamped into (a.t, b.t)
        double lo = std::min(a.t, b.t), hi = std::max(a.t, b.t);
        double t;
        if (std::abs(b.val - a.val) > 1e-300) {
            t = a.t + (target - a.val) * (b.t - a.t) / (b.val - a.val);
        } else {
            t = 0.5 * (lo + hi);
        }
        double inset = 0.05 * (hi - lo);
        if (!(t > lo + inset && t < hi - inset)) t = 0.5 * (lo + hi);
        return t;
    };

    while (evals < setup.max_evals) {
        double width = Uhi.t - Llo.t;
        if (width <= width_goal) break;
        double gap_lo = Lhi.set ? (Lhi.t - Llo.t) : 1e300;
        double gap_up = Ulo.set ? (Uhi.t - Ulo.t) : 1e300;
        if (gap_lo >= 1e300 && gap_up >= 1e300) break;
        // the certified width can never shrink below the two crossing gaps
        if (gap_lo + gap_up >= 0.98 * width && gap_lo < 1e300 && gap_up < 1e300) {
            // crossing points resolved as far as err permits
            double resolve = 0.02 * width;
            if (gap_lo <= resolve && gap_up <= resolve) break;
        }
        if (gap_lo >= gap_up) {
            if (!Lhi.set) {
                run(Llo.t + std::max(width_goal, 0.25 * width));
            } else {
                double t = next_probe(Llo, Lhi, 0.0);
                if (Lhi.t - Llo.t < 1e-14 * std::max(1.0, std::abs(Llo.t))) break;
                run(t);
            }
        } else {
            if (!Ulo.set) {
                run(Uhi.t - std::max(width_goal, 0.25 * width));
            } else {
                double t = next_probe(Ulo, Uhi, 0.0);
                if (Uhi.t - Ulo.t < 1e-14 * std::max(1.0, std::abs(Uhi.t))) break;
                run(t);
            }
        }
    }

    out.t_lo = Llo.t;
    out.t_hi = Uhi.t;
    out.evidence_lo = best_lo->cert_A;
    out.evidence_hi = best_hi->cert_B;
    out.truncation = setup.system->alphabet.truncation;

    // floor implied by the bracket factors: |log(1+err) - log(1-err)| / |slope|
    double slope = 0.0;
    {
        const EvalPoint *p = nullptr, *q = nullptr;
        for (const auto& e : out.trace)
            for (const auto& f : out.trace)
                if (f.t > e.t + 1e-12) {
                    double s = std::abs((std::log(std::max(f.lo_A, 1e-300)) -
                                         std::log(std::max(e.lo_A, 1e-300))) /
                                        (f.t - e.t));
                    if (s > slope) {
                        slope = s;
                        p = &e;
                        q = &f;
                    }
                }
        (void)p;
        (void)q;
    }
    if (slope > 0) {
        double floor_w =
            (std::log1p(out.err) - std::log1p(-out.err)) / slope;
        out.mesh_limited = width_goal < floor_w && (out.t_hi - out.t_lo) > width_goal;
    }
    out.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace dimcert
