#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "muller2d/muller2d.hpp"
#include "muller2d/problems.hpp"

using namespace muller2d;

namespace {

const Complex I(0.0, 1.0);

Complex random_complex(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

Problem corpus_item(const std::string& id) {
    for (auto& p : corpus())
        if (p.id == id) return p;
    throw std::logic_error("no corpus item " + id);
}

bool same_trace(const RootResult& a, const RootResult& b) {
    if (a.trace.size() != b.trace.size()) return false;
    for (std::size_t k = 0; k < a.trace.size(); ++k) {
        if (a.trace[k].x != b.trace[k].x || a.trace[k].y != b.trace[k].y) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("seed_points: definition and guard") {
    const auto pts = seed_points({1.0, 2.0}, 0.01);
    CHECK(pts[0] == PointPair{0.99, 1.99});
    CHECK(pts[1] == PointPair{1.0, 2.0});
    CHECK(pts[2] == PointPair{1.01, 2.01});

    const Complex d = 1e-3 * Complex(1.0, 1.0) / std::sqrt(2.0);
    const auto diag = seed_points({0.0, 0.0}, d);
    for (const auto& p : diag) CHECK(p.x == p.y);
    CHECK(std::abs(diag[1].x - diag[0].x) == doctest::Approx(1e-3));
    CHECK(std::abs(diag[2].x - diag[1].x) == doctest::Approx(1e-3));

    try {
        (void)seed_points({1.0, 1.0}, 0.0);
        FAIL("expected PrecondViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecondViolation);
    }
}

TEST_CASE("solver seeds admit a plane fit where the diagonal triple does not") {
    const PointPair start{0.3, -0.2};
    const Complex d = default_delta(0.3);
    const auto diag = seed_points(start, d);
    CHECK_THROWS_AS((void)fit_plane(diag[0], diag[1], diag[2], 1.0, 2.0, 3.0), Error);
    const auto pts = solver_seed_points(start, d);
    CHECK(pts[0] == diag[0]);
    CHECK(pts[1] == diag[1]);
    CHECK(pts[2].x == diag[2].x);
    CHECK(pts[2].y == start.y + I * d);
    CHECK_NOTHROW((void)fit_plane(pts[0], pts[1], pts[2], 1.0, 2.0, 3.0));
}

TEST_CASE("fit_plane: examples") {
    auto f = [](Complex x, Complex y) { return 2.0 * x + 3.0 * y + 1.0; };
    const PointPair a{0.0, 0.0}, b{1.0, 0.0}, c{0.0, 1.0};
    const auto p = fit_plane(a, b, c, f(a.x, a.y), f(b.x, b.y), f(c.x, c.y));
    CHECK(std::abs(p.c1 - 2.0) < 1e-15);
    CHECK(std::abs(p.c2 - 3.0) < 1e-15);
    CHECK(std::abs(p.c3 - 1.0) < 1e-15);

    const auto k = fit_plane({0.5, 1.0}, {2.0, -1.0}, {I, 3.0}, 5.0, 5.0, 5.0);
    CHECK(std::abs(k.c1) < 1e-14);
    CHECK(std::abs(k.c2) < 1e-14);
    CHECK(std::abs(k.c3 - 5.0) < 1e-14);

    auto g = [](Complex x, Complex y) { return I * x + (1.0 - I) * y; };
    const PointPair u{0.0, 0.0}, v{1.0, 1.0}, w{1.0, -1.0};
    const auto q = fit_plane(u, v, w, g(u.x, u.y), g(v.x, v.y), g(w.x, w.y));
    CHECK(std::abs(q.c1 - I) < 1e-15);
    CHECK(std::abs(q.c2 - (1.0 - I)) < 1e-15);
    CHECK(std::abs(q.c3) < 1e-15);
}

TEST_CASE("fit_plane: collinear points are degenerate") {
    try {
        (void)fit_plane({0.0, 0.0}, {1.0, 2.0}, {2.0, 4.0}, 1.0, 2.0, 3.0);
        FAIL("expected DegenerateGeometry");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateGeometry);
    }
    // Complex-collinear: third point on the complex line through the first two.
    CHECK_THROWS_AS((void)fit_plane({0.0, 0.0}, {1.0, I}, {I, -1.0}, 1.0, 2.0, 3.0), Error);
}

TEST_CASE("property: plane fit interpolates to 1e-10 when well conditioned") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        PointPair p[3];
        Complex f[3];
        for (int k = 0; k < 3; ++k) {
            p[k] = {random_complex(rng, 5.0), random_complex(rng, 5.0)};
            f[k] = random_complex(rng, 10.0);
        }
        PlaneFit fit;
        try {
            fit = fit_plane_with_condition(p[0], p[1], p[2], f[0], f[1], f[2]);
        } catch (const Error&) {
            continue;
        }
        if (fit.condition > 1e8) continue;
        ++checked;
        for (int k = 0; k < 3; ++k) {
            const Complex lhs = fit.coeffs.c1 * p[k].x + fit.coeffs.c2 * p[k].y + fit.coeffs.c3;
            const double scale = std::abs(fit.coeffs.c1 * p[k].x) + std::abs(fit.coeffs.c2 * p[k].y) +
                                 std::abs(fit.coeffs.c3) + std::abs(f[k]);
            CHECK(std::abs(lhs - f[k]) <= 1e-10 * scale);
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("intersect_zero_plane: examples") {
    const auto r = intersect_zero_plane({2.0, 3.0, 1.0});
    CHECK_FALSE(r.transposed);
    CHECK(std::abs(r(1.0) - (-1.0)) < 1e-15);
    CHECK(std::abs(r(0.0) - (-1.0 / 3.0)) < 1e-15);

    const auto h = intersect_zero_plane({0.0, 1.0, -4.0});
    CHECK_FALSE(h.transposed);
    CHECK(h(17.0) == Complex(4.0));

    const auto t = intersect_zero_plane({1.0, 0.0, -4.0});
    CHECK(t.transposed);
    CHECK(t(-3.0) == Complex(4.0));

    try {
        (void)intersect_zero_plane({0.0, 0.0, 1.0});
        FAIL("expected DegenerateGeometry");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateGeometry);
    }
    CHECK_THROWS_AS((void)intersect_zero_plane({0.0, 0.0, 0.0}), Error);
}

TEST_CASE("solve: affine system in at most 3 outer iterations") {
    BivariateSystem sys(
        "affine", [](Complex x, Complex y) { return x + y - 3.0; },
        [](Complex x, Complex y) { return x - y - 1.0; });
    SolverConfig cfg;
    cfg.seed_delta = 0.1;
    for (auto v : {Variant::M1, Variant::M2}) {
        cfg.variant = v;
        const auto r = muller2d_solve(sys, {0.0, 0.0}, cfg);
        CHECK(r.status == Status::Converged);
        CHECK(std::abs(r.x - 2.0) < 1e-10);
        CHECK(std::abs(r.y - 1.0) < 1e-10);
        CHECK(r.outer_iterations() <= 3);
    }
}

TEST_CASE("property: random nonsingular affine systems converge in at most 3 iterations") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        Complex a = random_complex(rng, 2.0), b = random_complex(rng, 2.0);
        Complex c = random_complex(rng, 2.0), d = random_complex(rng, 2.0);
        if (std::abs(a * d - b * c) < 0.2) continue;
        const Complex xr = random_complex(rng, 3.0), yr = random_complex(rng, 3.0);
        BivariateSystem sys(
            "affine", [=](Complex x, Complex y) { return a * (x - xr) + b * (y - yr); },
            [=](Complex x, Complex y) { return c * (x - xr) + d * (y - yr); });
        SolverConfig cfg;
        cfg.variant = trial % 2 ? Variant::M2 : Variant::M1;
        const auto r = muller2d_solve(sys, {random_complex(rng, 3.0), random_complex(rng, 3.0)}, cfg);
        CHECK(is_converged(r.status));
        CHECK(std::abs(r.x - xr) < 1e-10);
        CHECK(std::abs(r.y - yr) < 1e-10);
        CHECK(r.outer_iterations() <= 3);
    }
}

TEST_CASE("solve: circle-line from (0.8, 0.9) reaches (1, 1)") {
    for (auto v : {Variant::M1, Variant::M2}) {
        auto sys = corpus_item("C2").make();
        SolverConfig cfg;
        cfg.variant = v;
        const auto r = muller2d_solve(sys, {0.8, 0.9}, cfg);
        CHECK(r.status == Status::Converged);
        CHECK(std::abs(r.x - 1.0) < 1e-12);
        CHECK(std::abs(r.y - 1.0) < 1e-12);
        CHECK(std::abs(sys.f1(r.x, r.y)) < 1e-12);
        CHECK(std::abs(sys.f2(r.x, r.y)) < 1e-12);
    }
}

TEST_CASE("M1: returned pair lies on the final iteration's line") {
    for (const char* id : {"C2", "C4"}) {
        auto sys = corpus_item(id).make();
        SolverConfig cfg;
        std::vector<IterationDiagnostics> diags;
        Muller2dHooks hooks{[&](const IterationDiagnostics& d) { diags.push_back(d); }};
        const auto r = muller2d_solve(sys, corpus_item(id).start, cfg, hooks);
        REQUIRE(r.status == Status::Converged);
        REQUIRE_FALSE(diags.empty());
        const auto& last = diags.back();
        REQUIRE_FALSE(last.one_zero_polish);
        if (last.relation.transposed) {
            CHECK(r.x == last.relation(r.y));
        } else {
            CHECK(r.y == last.relation(r.x));
            const Complex formula = (-last.plane.c1 * r.x - last.plane.c3) / last.plane.c2;
            CHECK(std::abs(r.y - formula) <= 1e-13 * std::max(1.0, std::abs(formula)));
        }
    }
}

TEST_CASE("converged results pass re-evaluation") {
    for (const auto& p : corpus()) {
        for (auto v : {Variant::M1, Variant::M2}) {
            auto sys = p.make();
            SolverConfig cfg;
            cfg.variant = v;
            const auto r = muller2d_solve(sys, p.start, cfg);
            INFO(p.name);
            CHECK(is_converged(r.status));
            if (r.status == Status::Converged) {
                CHECK(std::abs(sys.f1(r.x, r.y)) < cfg.residual_tol);
                CHECK(std::abs(sys.f2(r.x, r.y)) < cfg.residual_tol);
                CHECK(r.trace.back().step_x < cfg.step_tol());
                CHECK(r.trace.back().step_y < cfg.step_tol());
            }
        }
    }
}

TEST_CASE("equation order changes the iterate sequence") {
    const auto p = corpus_item("C4");
    auto sys = p.make();
    SolverConfig cfg;
    const auto given = muller2d_solve(sys, p.start, cfg);
    cfg.order = EquationOrder::Swapped;
    const auto swapped = muller2d_solve(sys, p.start, cfg);
    CHECK_FALSE(same_trace(given, swapped));
}

TEST_CASE("alternating order fits the plane to each function in turn") {
    const auto p = corpus_item("C4");
    auto sys = p.make();
    SolverConfig cfg;
    cfg.order = EquationOrder::AlternateEachIteration;
    std::vector<IterationDiagnostics> diags;
    const auto r = muller2d_solve(sys, p.start, cfg, {[&](const IterationDiagnostics& d) { diags.push_back(d); }});
    CHECK(is_converged(r.status));
    for (const auto& d : diags) {
        if (d.one_zero_polish || d.role_swapped) continue;
        CHECK(d.plane_function == (d.index % 2 == 0 ? 1 : 2));
    }
}

TEST_CASE("property: recombination keeps converged pairs roots of the original system") {
    std::mt19937_64 rng(23);
    int converged = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Recombination m{random_complex(rng, 2.0), random_complex(rng, 2.0), random_complex(rng, 2.0),
                        random_complex(rng, 2.0)};
        if (std::abs(m.determinant()) < 0.1) continue;
        const auto p = corpus_item(trial % 2 ? "C2" : "C4");
        auto sys = p.make();
        SolverConfig cfg;
        cfg.recombine = m;
        cfg.variant = trial % 3 ? Variant::M1 : Variant::M2;
        const auto r = muller2d_solve(sys, p.start, cfg);
        if (r.status != Status::Converged) continue;
        ++converged;
        CHECK(std::abs(sys.f1(r.x, r.y)) < 10.0 * cfg.residual_tol);
        CHECK(std::abs(sys.f2(r.x, r.y)) < 10.0 * cfg.residual_tol);
        CHECK(r.f1_abs == doctest::Approx(std::abs(sys.f1(r.x, r.y))).epsilon(1e-6));
    }
    CHECK(converged > 20);
}

TEST_CASE("each outer iteration evaluates F1 and F2 once outside the inner solves") {
    for (auto v : {Variant::M1, Variant::M2}) {
        const auto p = corpus_item("C4");
        auto sys = p.make();
        SolverConfig cfg;
        cfg.variant = v;
        long inner = 0;
        int iterations = 0;
        const auto r = muller2d_solve(sys, p.start, cfg, {[&](const IterationDiagnostics& d) {
                                          inner += d.inner_evals;
                                          ++iterations;
                                      }});
        REQUIRE(r.status == Status::Converged);
        REQUIRE(iterations == r.outer_iterations());
        // Seeds (3 each) + inner-solve evaluations + one of each per iteration.
        CHECK(static_cast<long>(r.evals_f1 + r.evals_f2) == 6 + inner + 2L * r.outer_iterations());
        if (v == Variant::M1) CHECK(r.evals_f2 == 3u + static_cast<unsigned>(r.outer_iterations()));
    }
}

TEST_CASE("transposed geometry: F2 independent of y") {
    BivariateSystem sys(
        "t", [](Complex x, Complex y) { return x + y * y - 5.0; },
        [](Complex x, Complex) { return x - 4.0; });
    SolverConfig cfg;
    std::vector<IterationDiagnostics> diags;
    const auto r = muller2d_solve(sys, {3.5, 0.8}, cfg, {[&](const IterationDiagnostics& d) { diags.push_back(d); }});
    CHECK(is_converged(r.status));
    CHECK(std::abs(r.x - 4.0) < 1e-10);
    CHECK(std::abs(r.y - 1.0) < 1e-10);
    REQUIRE_FALSE(diags.empty());
    CHECK(diags.front().relation.transposed);
}

TEST_CASE("one function vanishing first triggers the polish exit") {
    const auto p = corpus_item("C3");
    auto sys = p.make();
    SolverConfig cfg;
    bool polished = false;
    const auto r = muller2d_solve(sys, p.start, cfg, {[&](const IterationDiagnostics& d) { polished |= d.one_zero_polish; }});
    CHECK(r.status == Status::ConvergedOneZero);
    CHECK(polished);
    CHECK(r.f1_abs < cfg.residual_tol);
    CHECK(r.f2_abs < cfg.residual_tol);
}

TEST_CASE("failure statuses") {
    SolverConfig cfg;
    SUBCASE("evaluation failure carries the point") {
        auto sys = corpus_item("C5").make();
        const auto r = muller2d_solve(sys, {0.1, 0.1}, cfg);
        CHECK(r.status == Status::EvaluationFailure);
        CHECK(r.detail.find("failed at") != std::string::npos);
        CHECK(r.detail.find("inside failure disk") != std::string::npos);
    }
    SUBCASE("constant functions give degenerate geometry") {
        BivariateSystem sys("flat", [](Complex, Complex) { return Complex(1.0); },
                            [](Complex, Complex) { return Complex(2.0); });
        const auto r = muller2d_solve(sys, {0.0, 0.0}, cfg);
        CHECK(r.status == Status::DegenerateGeometry);
    }
    SUBCASE("flat inner function gives inner divergence") {
        BivariateSystem sys("flat-inner", [](Complex, Complex) { return Complex(1.0); },
                            [](Complex x, Complex y) { return x - y; });
        const auto r = muller2d_solve(sys, {0.5, 0.2}, cfg);
        CHECK(r.status == Status::InnerDivergence);
    }
    SUBCASE("outer cap") {
        auto sys = corpus_item("C4").make();
        cfg.outer_cap = 1;
        const auto r = muller2d_solve(sys, {1.0, 0.0}, cfg);
        CHECK(r.status == Status::MaxOuterIterations);
        CHECK(r.outer_iterations() == 1);
    }
    SUBCASE("invalid configuration throws before any evaluation") {
        auto sys = corpus_item("C1").make();
        cfg.digits = 0;
        CHECK_THROWS_AS((void)muller2d_solve(sys, {0.0, 0.0}, cfg), Error);
        CHECK(sys.evals_f1() == 0);
    }
}

TEST_CASE("counters match a wrapping counter exactly") {
    const auto p = corpus_item("C4");
    auto inner = p.make();
    long c1 = 0, c2 = 0;
    BivariateSystem sys(
        "wrapped", [&](Complex x, Complex y) { ++c1; return inner.f1(x, y); },
        [&](Complex x, Complex y) { ++c2; return inner.f2(x, y); });
    SolverConfig cfg;
    cfg.variant = Variant::M2;
    const auto r = muller2d_solve(sys, p.start, cfg);
    CHECK(static_cast<long>(r.evals_f1) == c1);
    CHECK(static_cast<long>(r.evals_f2) == c2);
}

TEST_CASE("repeated solves are bit-identical") {
    for (const auto& p : corpus()) {
        auto a = p.make();
        auto b = p.make();
        SolverConfig cfg;
        cfg.variant = Variant::M2;
        const auto ra = muller2d_solve(a, p.start, cfg);
        const auto rb = muller2d_solve(b, p.start, cfg);
        CHECK(same_trace(ra, rb));
        CHECK(ra.evals_f1 == rb.evals_f1);
    }
}
