#pragma once

#include <array>
#include <functional>

#include "muller2d/types.hpp"

namespace muller2d {

using UnivariateFn = std::function<Complex(Complex)>;

/// Intermediate quantities of one parabolic step, exposed for diagnostics.
struct MullerStepParts {
    Complex q;
    Complex a;
    Complex b;
    Complex c;
    Complex d_plus;
    Complex d_minus;
    Complex next;
};

/// One Muller step through (x2, f2), (x1, f1), (x0, f0), oldest first.
/// The denominator is whichever of B +- sqrt(B^2 - 4AC) has the larger
/// modulus, ties going to the + branch.
MullerStepParts muller1d_step_parts(Complex x2, Complex x1, Complex x0,
                                    Complex f2, Complex f1, Complex f0);

inline Complex muller1d_step(Complex x2, Complex x1, Complex x0,
                             Complex f2, Complex f1, Complex f0) {
    return muller1d_step_parts(x2, x1, x0, f2, f1, f0).next;
}

enum class Muller1dStatus { Converged, MaxIterations, DegenerateStep };

std::string_view to_string(Muller1dStatus status);

struct Muller1dResult {
    /// Converged: the final iterate. MaxIterations: the iterate with the smallest |f|.
    Complex root;
    /// The exiting point of the iteration regardless of status.
    Complex last;
    Complex f_last;
    Muller1dStatus status = Muller1dStatus::MaxIterations;
    int iterations = 0;
    int evals = 0;
};

/// Runs Muller's method from the three given abscissae (oldest first).
/// Evaluates f once per seed and once per iteration. Evaluation failures
/// propagate as EvaluationError.
Muller1dResult muller1d_from(const UnivariateFn& f, const std::array<Complex, 3>& seeds,
                             int max_iterations, int digits);

/// Standalone entry point: seeds {start - delta, start, start + delta} and
/// iterates with cap cfg.inner_cap and precision 10^-cfg.digits.
Muller1dResult muller1d(const UnivariateFn& f, Complex start, const SolverConfig& cfg);

}  // namespace muller2d
