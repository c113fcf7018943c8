#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "muller2d/muller1d.hpp"
#include "muller2d/system.hpp"
#include "muller2d/types.hpp"

using namespace muller2d;

namespace {

const Complex I(0.0, 1.0);

double rel_err(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Complex random_complex(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

/// Three abscissae in the box [-3, 3]^2, pairwise at least 1 apart.
std::array<Complex, 3> spread_samples(std::mt19937_64& rng) {
    std::array<Complex, 3> xs;
    do {
        for (auto& x : xs) x = random_complex(rng, 3.0);
    } while (std::abs(xs[0] - xs[1]) < 1.0 || std::abs(xs[1] - xs[2]) < 1.0 ||
             std::abs(xs[0] - xs[2]) < 1.0);
    return xs;
}

}  // namespace

TEST_CASE("step: linear function gives the secant root exactly") {
    auto f = [](Complex x) { return x - 1.0; };
    const Complex next = muller1d_step(0.0, 0.5, 0.75, f(0.0), f(0.5), f(0.75));
    CHECK(next == Complex(1.0));
}

TEST_CASE("step: quadratic fit of x^2 - 2 lands on sqrt 2") {
    auto f = [](Complex x) { return x * x - 2.0; };
    const Complex next = muller1d_step(1.0, 1.5, 1.4, f(1.0), f(1.5), f(1.4));
    CHECK(rel_err(next, std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("step: exp(x) + 1 at 3.0i, 3.1i, 3.2i matches the hand-evaluated value") {
    // Evaluated once at 50 digits from the closed-form step and frozen.
    const Complex golden(1.7906889670733517692e-6, 3.141649969829617437);
    auto f = [](Complex x) { return std::exp(x) + 1.0; };
    const Complex a = 3.0 * I, b = 3.1 * I, c = 3.2 * I;
    const Complex next = muller1d_step(a, b, c, f(a), f(b), f(c));
    CHECK(std::abs(next - golden) < 1e-12);
}

TEST_CASE("step: denominator tie goes to the + branch") {
    // f = x^2 + 1 sampled at -2, -1, 0: B = 0, |D+| = |D-|.
    auto f = [](Complex x) { return x * x + 1.0; };
    const auto p = muller1d_step_parts(-2.0, -1.0, 0.0, f(-2.0), f(-1.0), f(0.0));
    CHECK(std::abs(p.b) == 0.0);
    CHECK(std::abs(p.d_plus) == std::abs(p.d_minus));
    CHECK(std::abs(p.next - I) < 1e-15);
}

TEST_CASE("step: flat triple and coincident abscissae are rejected") {
    try {
        (void)muller1d_step(0.0, 1.0, 2.0, 3.0, 3.0, 3.0);
        FAIL("expected DegenerateStep");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateStep);
    }
    try {
        (void)muller1d_step(0.0, 1.0, 1.0, 1.0, 2.0, 3.0);
        FAIL("expected PrecondViolation");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::PrecondViolation);
    }
}

TEST_CASE("property: one step is exact on quadratics") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex r1 = random_complex(rng, 3.0);
        const Complex r2 = r1 + 0.5 + random_complex(rng, 2.0);
        const Complex lead = 0.5 + random_complex(rng, 0.4) + 1.0;
        auto f = [&](Complex x) { return lead * (x - r1) * (x - r2); };
        const auto [x2, x1, x0] = spread_samples(rng);
        const Complex next = muller1d_step(x2, x1, x0, f(x2), f(x1), f(x0));
        const double scale = std::max({1.0, std::abs(r1), std::abs(r2)});
        CHECK(std::min(std::abs(next - r1), std::abs(next - r2)) / scale < 1e-12);
    }
}

TEST_CASE("property: affine functions reduce the step to the secant step") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex slope = 1.0 + random_complex(rng, 0.9);
        const Complex icpt = random_complex(rng, 5.0);
        auto f = [&](Complex x) { return slope * x + icpt; };
        const auto [x2, x1, x0] = spread_samples(rng);
        const auto p = muller1d_step_parts(x2, x1, x0, f(x2), f(x1), f(x0));
        const double fmax = std::max({std::abs(f(x0)), std::abs(f(x1)), std::abs(f(x2))});
        CHECK(std::abs(p.a) <= 1e-12 * fmax);
        const Complex secant = x0 - f(x0) * (x0 - x1) / (f(x0) - f(x1));
        CHECK(rel_err(p.next, secant) < 1e-12);
    }
}

TEST_CASE("property: translation equivariance") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        const Complex x2 = random_complex(rng, 2.0);
        const Complex x1 = x2 + 0.5 + random_complex(rng, 0.2);
        const Complex x0 = x1 + Complex(0.0, 0.5) + random_complex(rng, 0.2);
        const Complex f2 = random_complex(rng, 1.0), f1 = random_complex(rng, 1.0),
                      f0 = random_complex(rng, 1.0);
        const Complex c = random_complex(rng, 4.0);
        const Complex base = muller1d_step(x2, x1, x0, f2, f1, f0);
        const Complex moved = muller1d_step(x2 + c, x1 + c, x0 + c, f2, f1, f0);
        CHECK(std::abs(moved - (base + c)) <= 1e-12 * std::max(1.0, std::abs(base + c)));
    }
}

TEST_CASE("muller1d: f(x) = x converges to 0 within two iterations") {
    SolverConfig cfg;
    const auto r = muller1d([](Complex x) { return x; }, Complex(0.1, 0.1), cfg);
    CHECK(r.status == Muller1dStatus::Converged);
    CHECK(std::abs(r.root) < 1e-12);
    CHECK(r.iterations <= 2);
}

TEST_CASE("muller1d: exp(x) + 1 from 3i finds i pi") {
    SolverConfig cfg;
    cfg.inner_cap = 50;
    auto f = [](Complex x) { return std::exp(x) + 1.0; };
    const auto r = muller1d(f, 3.0 * I, cfg);
    CHECK(r.status == Muller1dStatus::Converged);
    CHECK(std::abs(r.root - Complex(0.0, M_PI)) < 1e-12);
    CHECK(std::abs(f(r.root)) < 1e-12);
}

TEST_CASE("muller1d: local convergence picks the nearer root") {
    SolverConfig cfg;
    cfg.inner_cap = 50;
    const Complex near(1.0, 2.0);
    const auto r = muller1d([&](Complex x) { return (x - near) * (x - 5.0); }, Complex(1.2, 1.9), cfg);
    CHECK(r.status == Muller1dStatus::Converged);
    CHECK(std::abs(r.root - near) < 1e-12);
}

TEST_CASE("muller1d: evals = 3 + iterations, one evaluation per iteration") {
    for (int cap : {1, 2, 5, 40}) {
        int calls = 0;
        auto f = [&](Complex x) {
            ++calls;
            return std::exp(x) - 2.0 + x * x;
        };
        SolverConfig cfg;
        cfg.inner_cap = cap;
        const auto r = muller1d(f, Complex(0.3, 0.2), cfg);
        CHECK(r.evals == 3 + r.iterations);
        CHECK(calls == r.evals);
        CHECK(r.iterations <= cap);
    }
}

TEST_CASE("muller1d: cap exhaustion returns the best iterate") {
    SolverConfig cfg;
    cfg.inner_cap = 2;
    std::vector<std::pair<Complex, double>> seen;
    auto f = [&](Complex x) {
        const Complex v = std::cos(x) - x;
        seen.push_back({x, std::abs(v)});
        return v;
    };
    const auto r = muller1d(f, Complex(3.0, 1.0), cfg);
    REQUIRE(r.status == Muller1dStatus::MaxIterations);
    double best = INFINITY;
    Complex arg;
    for (const auto& [x, v] : seen) {
        if (v < best) {
            best = v;
            arg = x;
        }
    }
    CHECK(r.root == arg);
}

TEST_CASE("muller1d: empirical order on x^3 - 2 is near 1.84") {
    const double root = std::cbrt(2.0);
    std::vector<Complex> xs;
    auto f = [&](Complex x) {
        xs.push_back(x);
        return x * x * x - 2.0;
    };
    (void)muller1d_from(f, {0.6, 0.9, 0.75}, 50, 15);
    std::vector<double> e;
    for (std::size_t k = 3; k < xs.size(); ++k) {
        const double err = std::abs(xs[k] - root);
        if (err > 1e-14) e.push_back(err);
    }
    REQUIRE(e.size() >= 4);
    const std::size_t n = e.size();
    // log e_{j+1} / log e_j, averaged over the last three resolvable iterates.
    const double p = 0.5 * (std::log(e[n - 1]) / std::log(e[n - 2]) +
                            std::log(e[n - 2]) / std::log(e[n - 3]));
    MESSAGE("empirical order " << p);
    CHECK(p >= 1.6);
    CHECK(p <= 2.0);
}

TEST_CASE("muller1d: evaluation errors propagate with the point attached") {
    SolverConfig cfg;
    auto f = [](Complex x) -> Complex {
        if (std::abs(x) < 0.5) throw EvaluationError("inside hole", 0, x, 0.0);
        return x - 0.2;
    };
    try {
        (void)muller1d(f, Complex(1.0, 0.0), cfg);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::abs(e.x()) < 0.5);
    }
}

TEST_CASE("config validation") {
    SolverConfig ok;
    CHECK_NOTHROW(ok.validate());
    auto expect_invalid = [](SolverConfig c) {
        try {
            c.validate();
            FAIL("expected InvalidConfig");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidConfig);
        }
    };
    SolverConfig c;
    c.digits = 0;
    expect_invalid(c);
    c = {};
    c.inner_cap = 0;
    expect_invalid(c);
    c = {};
    c.outer_cap = 0;
    expect_invalid(c);
    c = {};
    c.residual_tol = 0.0;
    expect_invalid(c);
    c = {};
    c.zero_tol = -1.0;
    expect_invalid(c);
    c = {};
    c.seed_delta = Complex(0.0);
    expect_invalid(c);
    c = {};
    c.recombine = Recombination{1.0, 2.0, 2.0, 4.0};
    expect_invalid(c);
    c = {};
    c.recombine = Recombination{1.0, 1.0, 1.0, -1.0};
    CHECK_NOTHROW(c.validate());
    CHECK(ok.step_tol() == doctest::Approx(1e-12));
}

TEST_CASE("default delta scales with the start") {
    CHECK(std::abs(default_delta(0.0)) == doctest::Approx(1e-3));
    CHECK(std::abs(default_delta(9.0)) == doctest::Approx(1e-2));
    const Complex d = default_delta(0.0);
    CHECK(d.real() == doctest::Approx(d.imag()));
}

TEST_CASE("status names round-trip") {
    for (auto s : {Status::Converged, Status::ConvergedOneZero, Status::MaxOuterIterations,
                   Status::InnerDivergence, Status::EvaluationFailure, Status::DegenerateGeometry,
                   Status::JacobianBreakdown, Status::SingularJacobian, Status::SingularUpdate,
                   Status::Stalled}) {
        CHECK(parse_status(to_string(s)) == s);
    }
    CHECK_FALSE(parse_status("Nope").has_value());
}

TEST_CASE("bivariate system counts every evaluation, failed ones included") {
    BivariateSystem sys(
        "t", [](Complex x, Complex) -> Complex {
            if (x.real() < 0) throw std::runtime_error("negative");
            return x;
        },
        [](Complex, Complex y) { return y / 0.0; });
    CHECK(sys.f1(1.0, 0.0) == Complex(1.0));
    try {
        (void)sys.f1(-1.0, 2.0);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.function() == 1);
        CHECK(e.x() == Complex(-1.0));
        CHECK(e.y() == Complex(2.0));
    }
    try {
        (void)sys.f2(0.0, 1.0);
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(e.function() == 2);
    }
    CHECK(sys.evals_f1() == 2);
    CHECK(sys.evals_f2() == 1);
    sys.reset_counters();
    CHECK(sys.evals_f1() == 0);
}
