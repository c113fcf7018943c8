#pragma once

#include <array>
#include <functional>

#include "muller2d/types.hpp"

namespace muller2d {

/// Up to two unknowns; single-unknown problems ignore the second slot.
using Unknowns = std::array<Complex, 2>;
using CoefficientFn = std::function<Complex(int, const Unknowns&)>;

/// Three-term recurrence alpha_n a_{n+1} + beta_n a_n + gamma_n a_{n-1} = 0
/// whose minimal-solution condition, inverted `inversion_index` times, is the
/// root condition.
struct CFProblem {
    CoefficientFn alpha;
    CoefficientFn beta;
    CoefficientFn gamma;
    int inversion_index = 0;
    int max_depth = 3000;
    double cf_tol = 1e-14;
};

struct CFValue {
    Complex value;
    /// Number of tail levels consumed by the Lentz recursion.
    int depth = 0;
    /// |delta - 1| of the last Lentz multiplier.
    double last_deviation = 0.0;
};

/// beta_k - alpha_{k-1} gamma_k / (beta_{k-1} - ...) - alpha_k gamma_{k+1} / (beta_{k+1} - ...),
/// tail by modified Lentz. Throws Error{CFNonConvergence} when max_depth runs
/// out with |delta - 1| > sqrt(cf_tol), EvaluationError for non-finite
/// coefficients, Error{PrecondViolation} for an inconsistent problem.
CFValue cf_eval_detailed(const CFProblem& p, const Unknowns& u);

inline Complex cf_eval(const CFProblem& p, const Unknowns& u) { return cf_eval_detailed(p, u).value; }

}  // namespace muller2d
