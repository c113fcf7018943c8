#include "muller2d/muller2d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

namespace muller2d {

std::array<PointPair, 3> seed_points(PointPair start, Complex delta) {
    if (!(std::abs(delta) > 0.0)) {
        throw Error(ErrorKind::PrecondViolation, "seed_points: delta must be nonzero");
    }
    return {{{start.x - delta, start.y - delta},
             {start.x, start.y},
             {start.x + delta, start.y + delta}}};
}

std::array<PointPair, 3> solver_seed_points(PointPair start, Complex delta) {
    auto pts = seed_points(start, delta);
    pts[2].y = start.y + Complex(0.0, 1.0) * delta;
    return pts;
}

PlaneFit fit_plane_with_condition(const PointPair& p1, const PointPair& p2, const PointPair& p3,
                                  Complex f1, Complex f2, Complex f3) {
    std::array<std::array<Complex, 4>, 3> m{{
        {p1.x, p1.y, 1.0, f1},
        {p2.x, p2.y, 1.0, f2},
        {p3.x, p3.y, 1.0, f3},
    }};
    for (auto& row : m) {
        const double s = std::max({std::abs(row[0]), std::abs(row[1]), 1.0});
        for (auto& v : row) v /= s;
    }

    std::array<double, 3> pivots{};
    for (int col = 0; col < 3; ++col) {
        int best = col;
        for (int r = col + 1; r < 3; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[best][col])) best = r;
        }
        std::swap(m[col], m[best]);
        pivots[col] = std::abs(m[col][col]);
        if (!(pivots[col] > 0.0)) {
            throw Error(ErrorKind::DegenerateGeometry, "fit_plane: singular point configuration");
        }
        for (int r = col + 1; r < 3; ++r) {
            const Complex factor = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= factor * m[col][c];
        }
    }
    const double cond = *std::max_element(pivots.begin(), pivots.end()) /
                        *std::min_element(pivots.begin(), pivots.end());
    if (!(cond <= kPlaneConditionLimit)) {
        throw Error(ErrorKind::DegenerateGeometry, "fit_plane: nearly collinear points");
    }

    std::array<Complex, 3> c{};
    for (int r = 2; r >= 0; --r) {
        Complex acc = m[r][3];
        for (int k = r + 1; k < 3; ++k) acc -= m[r][k] * c[k];
        c[r] = acc / m[r][r];
    }
    return {{c[0], c[1], c[2]}, cond};
}

LinearRelation intersect_zero_plane(const PlaneCoeffs& c) {
    const double a1 = std::abs(c.c1);
    const double a2 = std::abs(c.c2);
    const double floor = 1e-14 * (1.0 + std::abs(c.c3));
    if (a1 < floor && a2 < floor) {
        throw Error(ErrorKind::DegenerateGeometry, "plane is parallel to z = 0");
    }
    if (a2 <= kTransposeThreshold * a1) {
        return {true, -c.c2 / c.c1, -c.c3 / c.c1};
    }
    return {false, -c.c1 / c.c2, -c.c3 / c.c2};
}

namespace {

/// Values of the working (reordered / recombined) functions together with the
/// original residual moduli at one point.
struct PointValues {
    Complex g[2];
    double orig_abs[2] = {0.0, 0.0};
};

class WorkingSystem {
public:
    WorkingSystem(BivariateSystem& sys, const std::optional<Recombination>& mix)
        : sys_(sys), mix_(mix) {}

    PointValues at(Complex x, Complex y) {
        const Complex a = sys_.f1(x, y);
        const Complex b = sys_.f2(x, y);
        PointValues v;
        v.orig_abs[0] = std::abs(a);
        v.orig_abs[1] = std::abs(b);
        if (mix_) {
            v.g[0] = mix_->alpha1 * a + mix_->beta1 * b;
            v.g[1] = mix_->alpha2 * a + mix_->beta2 * b;
        } else {
            v.g[0] = a;
            v.g[1] = b;
        }
        return v;
    }

    /// Working function k (0 or 1) alone.
    Complex g(int k, Complex x, Complex y) {
        if (!mix_) return sys_.eval(k + 1, x, y);
        const Complex a = sys_.f1(x, y);
        const Complex b = sys_.f2(x, y);
        return k == 0 ? mix_->alpha1 * a + mix_->beta1 * b : mix_->alpha2 * a + mix_->beta2 * b;
    }

private:
    BivariateSystem& sys_;
    const std::optional<Recombination>& mix_;
};

/// Makes three inner seeds pairwise distinct by pushing older ones away from
/// newer ones by `nudge`.
std::array<Complex, 3> distinct_seeds(std::array<Complex, 3> s, Complex nudge) {
    constexpr double kCoincide = 1e-15;
    if (std::abs(s[1] - s[2]) < kCoincide) s[1] = s[2] - nudge;
    if (std::abs(s[0] - s[1]) < kCoincide || std::abs(s[0] - s[2]) < kCoincide) {
        s[0] = s[1] - nudge;
        if (std::abs(s[0] - s[2]) < kCoincide) s[0] = s[1] - 2.0 * nudge;
    }
    return s;
}

struct InnerOutcome {
    Complex value;
    int iterations = 0;
    int evals = 0;
};

struct InnerDivergence {};

InnerOutcome run_inner(const UnivariateFn& f, const std::array<Complex, 3>& seeds, int cap,
                       int digits, Complex nudge) {
    const auto r = muller1d_from(f, distinct_seeds(seeds, nudge), cap, digits);
    if (r.status == Muller1dStatus::DegenerateStep || !is_finite(r.last)) {
        throw InnerDivergence{};
    }
    return {r.last, r.iterations, r.evals};
}

}  // namespace

RootResult muller2d_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                          const Muller2dHooks& hooks) {
    cfg.validate();
    const std::uint64_t base_f1 = sys.evals_f1();
    const std::uint64_t base_f2 = sys.evals_f2();
    const double tol = cfg.step_tol();
    const Complex delta =
        cfg.seed_delta.value_or(default_delta(std::max(std::abs(start.x), std::abs(start.y))));
    const Complex nudge = delta / 10.0;

    WorkingSystem work(sys, cfg.recombine);
    RootResult result;
    std::array<PointPair, 3> pts = solver_seed_points(start, delta);
    std::array<PointValues, 3> vals{};

    auto finish = [&](Status status, std::string detail = {}) {
        result.status = status;
        result.detail = std::move(detail);
        result.x = pts[2].x;
        result.y = pts[2].y;
        result.evals_f1 = sys.evals_f1() - base_f1;
        result.evals_f2 = sys.evals_f2() - base_f2;
        return result;
    };

    try {
        for (int i = 0; i < 3; ++i) vals[i] = work.at(pts[i].x, pts[i].y);
    } catch (const EvaluationError& e) {
        pts[2] = start;
        return finish(Status::EvaluationFailure, e.what());
    }
    result.f1_abs = vals[2].orig_abs[0];
    result.f2_abs = vals[2].orig_abs[1];

    double zero_tol = 0.0;
    if (cfg.zero_tol) {
        zero_tol = *cfg.zero_tol;
    } else {
        double scale = 0.0;
        for (const auto& v : vals) scale = std::max({scale, std::abs(v.g[0]), std::abs(v.g[1])});
        zero_tol = 1e-10 * (1.0 + scale);
    }

    std::optional<PlaneCoeffs> last_plane[2];
    int degenerate_run = 0;
    int polish_attempts = 0;
    constexpr int kMaxPolishAttempts = 3;

    auto accept = [&](const PointPair& next, const PointValues& v, int inner_iters) {
        IterationRecord rec;
        rec.index = static_cast<int>(result.trace.size()) + 1;
        rec.x = next.x;
        rec.y = next.y;
        rec.f1_abs = v.orig_abs[0];
        rec.f2_abs = v.orig_abs[1];
        rec.step_x = std::abs(next.x - pts[2].x);
        rec.step_y = std::abs(next.y - pts[2].y);
        rec.inner_iters_used = inner_iters;
        result.trace.push_back(rec);
        pts = {pts[1], pts[2], next};
        vals = {vals[1], vals[2], v};
        result.f1_abs = v.orig_abs[0];
        result.f2_abs = v.orig_abs[1];
        return rec;
    };

    try {
        for (int n = 1; n <= cfg.outer_cap; ++n) {
            const bool swap = cfg.order == EquationOrder::Swapped ||
                              (cfg.order == EquationOrder::AlternateEachIteration && n % 2 == 0);
            int plane_fn = swap ? 0 : 1;

            IterationDiagnostics diag;
            diag.index = n;

            // (a)-(b): plane through the current triple, intersected with z = 0.
            // If the designated function gives no usable plane (typically because
            // it already vanishes at all three pairs), try the other one for this
            // iteration, then the last good plane, then a fresh perturbation.
            auto try_plane = [&](int fn) -> std::optional<LinearRelation> {
                try {
                    const auto fit = fit_plane(pts[0], pts[1], pts[2], vals[0].g[fn],
                                               vals[1].g[fn], vals[2].g[fn]);
                    const LinearRelation rel = intersect_zero_plane(fit);
                    last_plane[fn] = fit;
                    diag.plane = fit;
                    return rel;
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::DegenerateGeometry) throw;
                    return std::nullopt;
                }
            };
            std::optional<LinearRelation> relation = try_plane(plane_fn);
            if (!relation) {
                relation = try_plane(1 - plane_fn);
                if (relation) {
                    plane_fn = 1 - plane_fn;
                    diag.role_swapped = true;
                }
            }
            if (relation) {
                degenerate_run = 0;
            } else {
                ++degenerate_run;
                if (degenerate_run >= 3) {
                    return finish(Status::DegenerateGeometry,
                                  "three consecutive degenerate plane fits");
                }
                if (last_plane[plane_fn]) {
                    relation = intersect_zero_plane(*last_plane[plane_fn]);
                    diag.plane = *last_plane[plane_fn];
                    diag.reused_plane = true;
                } else {
                    // No usable plane yet: move the oldest pair off the line and retry.
                    const Complex shift = delta * static_cast<double>(degenerate_run + 1);
                    pts[0] = {pts[2].x + shift, pts[2].y - Complex(0.0, 1.0) * shift};
                    vals[0] = work.at(pts[0].x, pts[0].y);
                    --n;
                    continue;
                }
            }
            const int line_fn = 1 - plane_fn;
            diag.plane_function = plane_fn + 1;
            diag.relation = *relation;

            const std::array<Complex, 3> xs{pts[0].x, pts[1].x, pts[2].x};
            const std::array<Complex, 3> ys{pts[0].y, pts[1].y, pts[2].y};
            const LinearRelation rel = *relation;
            PointPair next;
            int inner_iters = 0;
            int inner_evals = 0;
            try {
                if (!rel.transposed) {
                    // (c): solve the line function along y = rel(x).
                    const auto ix = run_inner(
                        [&](Complex t) { return work.g(line_fn, t, rel(t)); }, xs, cfg.inner_cap,
                        cfg.digits, nudge);
                    next.x = ix.value;
                    inner_iters += ix.iterations;
                    inner_evals += ix.evals;
                    // (d)
                    if (cfg.variant == Variant::M1) {
                        next.y = rel(next.x);
                    } else {
                        const auto iy = run_inner(
                            [&](Complex t) { return work.g(plane_fn, next.x, t); }, ys,
                            cfg.inner_cap, cfg.digits, nudge);
                        next.y = iy.value;
                        inner_iters += iy.iterations;
                        inner_evals += iy.evals;
                    }
                } else {
                    const auto iy = run_inner(
                        [&](Complex t) { return work.g(line_fn, rel(t), t); }, ys, cfg.inner_cap,
                        cfg.digits, nudge);
                    next.y = iy.value;
                    inner_iters += iy.iterations;
                    inner_evals += iy.evals;
                    if (cfg.variant == Variant::M1) {
                        next.x = rel(next.y);
                    } else {
                        const auto ix = run_inner(
                            [&](Complex t) { return work.g(plane_fn, t, next.y); }, xs,
                            cfg.inner_cap, cfg.digits, nudge);
                        next.x = ix.value;
                        inner_iters += ix.iterations;
                        inner_evals += ix.evals;
                    }
                }
            } catch (const InnerDivergence&) {
                return finish(Status::InnerDivergence, "inner Muller solve produced no usable step");
            }
            if (!is_finite(next.x) || !is_finite(next.y)) {
                return finish(Status::InnerDivergence, "inner Muller solve left the finite range");
            }

            // (e): one evaluation of each function outside the inner solves.
            const PointValues v = work.at(next.x, next.y);
            const IterationRecord rec = accept(next, v, inner_iters);
            diag.inner_evals = inner_evals;
            diag.pair = next;
            if (hooks.on_iteration) hooks.on_iteration(diag);

            // (f): exit conditions.
            const bool small_steps = rec.step_x < tol && rec.step_y < tol;
            if (small_steps && rec.f1_abs < cfg.residual_tol && rec.f2_abs < cfg.residual_tol) {
                return finish(Status::Converged);
            }

            const bool zero0 = std::abs(v.g[0]) < zero_tol;
            const bool zero1 = std::abs(v.g[1]) < zero_tol;
            const bool x_fixed = rec.step_x < tol;
            const bool y_fixed = rec.step_y < tol;
            if (zero0 != zero1 && x_fixed != y_fixed && polish_attempts < kMaxPolishAttempts) {
                // One function has vanished and one unknown has settled: hold that
                // unknown and solve the other function in the remaining unknown.
                ++polish_attempts;
                const int other = zero0 ? 1 : 0;
                PointPair polished = pts[2];
                InnerOutcome io;
                try {
                    if (x_fixed) {
                        const Complex xf = pts[2].x;
                        io = run_inner([&](Complex t) { return work.g(other, xf, t); },
                                       {pts[0].y, pts[1].y, pts[2].y}, 3 * cfg.inner_cap,
                                       cfg.digits, nudge);
                        polished.y = io.value;
                    } else {
                        const Complex yf = pts[2].y;
                        io = run_inner([&](Complex t) { return work.g(other, t, yf); },
                                       {pts[0].x, pts[1].x, pts[2].x}, 3 * cfg.inner_cap,
                                       cfg.digits, nudge);
                        polished.x = io.value;
                    }
                } catch (const InnerDivergence&) {
                    continue;
                }
                const PointValues pv = work.at(polished.x, polished.y);
                if (pv.orig_abs[0] < cfg.residual_tol && pv.orig_abs[1] < cfg.residual_tol) {
                    accept(polished, pv, io.iterations);
                    if (hooks.on_iteration) {
                        IterationDiagnostics pd;
                        pd.index = static_cast<int>(result.trace.size());
                        pd.inner_evals = io.evals;
                        pd.pair = polished;
                        pd.one_zero_polish = true;
                        hooks.on_iteration(pd);
                    }
                    return finish(Status::ConvergedOneZero);
                }
            }
        }
    } catch (const EvaluationError& e) {
        return finish(Status::EvaluationFailure, e.what());
    } catch (const Error& e) {
        return finish(Status::DegenerateGeometry, e.what());
    }
    return finish(Status::MaxOuterIterations, "outer iteration cap reached");
}

}  // namespace muller2d
