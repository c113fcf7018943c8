#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "muller2d/types.hpp"

namespace muller2d {

struct PointPair {
    Complex x;
    Complex y;

    friend bool operator==(const PointPair&, const PointPair&) = default;
};

/// A bivariate evaluation contract. Implementations signal failure by throwing
/// (any std::exception) or by returning a non-finite value.
using BivariateFn = std::function<Complex(Complex, Complex)>;

/// The pair (F1, F2) with per-function evaluation counters. Counters belong to
/// the instance; concurrent solves should each use their own instance.
class BivariateSystem {
public:
    BivariateSystem(std::string name, BivariateFn f1, BivariateFn f2);

    const std::string& name() const noexcept { return name_; }

    /// Evaluates F_which (1 or 2). Increments the counter even when the
    /// evaluation fails; failures surface as EvaluationError.
    Complex eval(int which, Complex x, Complex y);
    Complex f1(Complex x, Complex y) { return eval(1, x, y); }
    Complex f2(Complex x, Complex y) { return eval(2, x, y); }

    std::uint64_t evals_f1() const noexcept { return evals_[0]; }
    std::uint64_t evals_f2() const noexcept { return evals_[1]; }
    void reset_counters() noexcept { evals_[0] = evals_[1] = 0; }

private:
    std::string name_;
    BivariateFn fns_[2];
    std::uint64_t evals_[2] = {0, 0};
};

}  // namespace muller2d
