#include "muller2d/continued_fraction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace muller2d {

namespace {

constexpr double kTiny = 1e-300;

Complex checked(Complex v, const char* which, int n, const Unknowns& u) {
    if (!is_finite(v)) {
        throw EvaluationError(std::string("continued fraction: non-finite ") + which + "_" +
                                  std::to_string(n),
                              0, u[0], u[1]);
    }
    return v;
}

}  // namespace

CFValue cf_eval_detailed(const CFProblem& p, const Unknowns& u) {
    if (!p.alpha || !p.beta || !p.gamma) {
        throw Error(ErrorKind::PrecondViolation, "continued fraction: missing coefficient generator");
    }
    if (p.inversion_index < 0 || p.inversion_index >= p.max_depth || !(p.cf_tol > 0.0)) {
        throw Error(ErrorKind::PrecondViolation, "continued fraction: bad depth/inversion/tolerance");
    }
    const int k = p.inversion_index;
    auto alpha = [&](int n) { return checked(p.alpha(n, u), "alpha", n, u); };
    auto beta = [&](int n) { return checked(p.beta(n, u), "beta", n, u); };
    auto gamma = [&](int n) { return checked(p.gamma(n, u), "gamma", n, u); };

    // Finite (inverted) part, built upward from beta_0.
    Complex fin = beta(0);
    for (int j = 1; j <= k; ++j) {
        if (fin == Complex{}) fin = kTiny;
        fin = beta(j) - alpha(j - 1) * gamma(j) / fin;
    }

    // Tail b0 + a1/(b1 + a2/(b2 + ...)) with b0 = 0, a_n = -alpha_{j-1} gamma_j,
    // b_n = beta_j, j = k + n; its value is minus the subtracted tail.
    Complex f = kTiny;
    Complex c = f;
    Complex d = 0.0;
    CFValue out;
    double dev = 1.0;
    int n = 1;
    for (; k + n <= p.max_depth; ++n) {
        const int j = k + n;
        const Complex an = -alpha(j - 1) * gamma(j);
        const Complex bn = beta(j);
        d = bn + an * d;
        if (d == Complex{}) d = kTiny;
        c = bn + an / c;
        if (c == Complex{}) c = kTiny;
        d = 1.0 / d;
        const Complex delta = c * d;
        f *= delta;
        dev = std::abs(delta - 1.0);
        if (dev < p.cf_tol) break;
    }
    out.depth = std::min(n, p.max_depth - k);
    out.last_deviation = dev;
    if (!(dev < p.cf_tol) && !(dev <= std::sqrt(p.cf_tol))) {
        throw Error(ErrorKind::CFNonConvergence, "continued fraction: depth exhausted");
    }
    out.value = fin + f;
    if (!is_finite(out.value)) {
        throw EvaluationError("continued fraction: non-finite value", 0, u[0], u[1]);
    }
    return out;
}

}  // namespace muller2d
