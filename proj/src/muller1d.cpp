#include "muller2d/muller1d.hpp"

#include <cmath>

namespace muller2d {

std::string_view to_string(Muller1dStatus status) {
    switch (status) {
        case Muller1dStatus::Converged: return "Converged";
        case Muller1dStatus::MaxIterations: return "MaxIterations";
        case Muller1dStatus::DegenerateStep: return "DegenerateStep";
    }
    return "Unknown";
}

MullerStepParts muller1d_step_parts(Complex x2, Complex x1, Complex x0,
                                    Complex f2, Complex f1, Complex f0) {
    if (!(std::abs(x1 - x2) > 0.0) || !(std::abs(x0 - x1) > 0.0)) {
        throw Error(ErrorKind::PrecondViolation, "muller step: abscissae coincide");
    }
    MullerStepParts p;
    p.q = (x0 - x1) / (x1 - x2);
    const Complex q = p.q;
    const Complex q2 = q * q;
    p.a = f0 * q - q * (1.0 + q) * f1 + q2 * f2;
    p.b = (2.0 * q + 1.0) * f0 - (1.0 + q) * (1.0 + q) * f1 + q2 * f2;
    p.c = (1.0 + q) * f0;
    const Complex root = std::sqrt(p.b * p.b - 4.0 * p.a * p.c);
    p.d_plus = p.b + root;
    p.d_minus = p.b - root;
    const Complex denom = std::abs(p.d_minus) > std::abs(p.d_plus) ? p.d_minus : p.d_plus;
    if (!(std::abs(denom) >= 1e-300)) {
        throw Error(ErrorKind::DegenerateStep, "muller step: both denominators vanish");
    }
    p.next = x0 - (x0 - x1) * 2.0 * p.c / denom;
    return p;
}

Muller1dResult muller1d_from(const UnivariateFn& f, const std::array<Complex, 3>& seeds,
                             int max_iterations, int digits) {
    const double tol = std::pow(10.0, -digits);
    Complex x2 = seeds[0], x1 = seeds[1], x0 = seeds[2];
    if (!(std::abs(x1 - x2) > 0.0) || !(std::abs(x0 - x1) > 0.0) ||
        !(std::abs(x0 - x2) > 0.0)) {
        throw Error(ErrorKind::PrecondViolation, "muller1d: seeds must be pairwise distinct");
    }

    Muller1dResult r;
    Complex f2 = f(x2);
    Complex f1 = f(x1);
    Complex f0 = f(x0);
    r.evals = 3;

    Complex best = x0;
    double best_abs = std::abs(f0);
    auto consider = [&](Complex x, Complex fx) {
        if (std::abs(fx) < best_abs) {
            best_abs = std::abs(fx);
            best = x;
        }
    };
    consider(x1, f1);
    consider(x2, f2);

    r.last = x0;
    r.f_last = f0;
    if (f0 == Complex{}) {
        r.root = x0;
        r.status = Muller1dStatus::Converged;
        return r;
    }

    for (int j = 0; j < max_iterations; ++j) {
        Complex next;
        try {
            next = muller1d_step(x2, x1, x0, f2, f1, f0);
        } catch (const Error&) {
            r.status = Muller1dStatus::DegenerateStep;
            r.root = best;
            return r;
        }
        if (!is_finite(next)) {
            r.status = Muller1dStatus::DegenerateStep;
            r.root = best;
            return r;
        }
        const Complex fn = f(next);
        ++r.evals;
        ++r.iterations;
        const double step = std::abs(next - x0);
        x2 = x1; f2 = f1;
        x1 = x0; f1 = f0;
        x0 = next; f0 = fn;
        r.last = x0;
        r.f_last = f0;
        consider(x0, f0);
        if (step < tol || f0 == Complex{}) {
            r.status = Muller1dStatus::Converged;
            r.root = x0;
            return r;
        }
    }
    r.status = Muller1dStatus::MaxIterations;
    r.root = best;
    return r;
}

Muller1dResult muller1d(const UnivariateFn& f, Complex start, const SolverConfig& cfg) {
    cfg.validate();
    const Complex delta = cfg.seed_delta.value_or(default_delta(std::abs(start)));
    return muller1d_from(f, {start - delta, start, start + delta}, cfg.inner_cap, cfg.digits);
}

}  // namespace muller2d
