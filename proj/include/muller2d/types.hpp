#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace muller2d {

using Complex = std::complex<double>;

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

enum class ErrorKind {
    PrecondViolation,
    InvalidConfig,
    DegenerateStep,
    DegenerateGeometry,
    EvaluationFailure,
    CFNonConvergence,
};

std::string_view to_string(ErrorKind kind);

/// Exception raised by the building-block operations (single steps, plane fits,
/// continued-fraction evaluation). Solvers catch these and report a status.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A function evaluation threw or produced a non-finite value.
class EvaluationError : public Error {
public:
    EvaluationError(const std::string& what, int function, Complex x, Complex y)
        : Error(ErrorKind::EvaluationFailure, what), function_(function), x_(x), y_(y) {}

    /// 1 or 2 for bivariate systems, 0 for univariate functions.
    int function() const noexcept { return function_; }
    Complex x() const noexcept { return x_; }
    Complex y() const noexcept { return y_; }

private:
    int function_;
    Complex x_;
    Complex y_;
};

enum class Variant { M1, M2 };

enum class EquationOrder { AsGiven, Swapped, AlternateEachIteration };

/// F*_1 = alpha1 F1 + beta1 F2, F*_2 = alpha2 F1 + beta2 F2.
struct Recombination {
    Complex alpha1{1.0};
    Complex beta1{0.0};
    Complex alpha2{0.0};
    Complex beta2{1.0};

    Complex determinant() const { return alpha1 * beta2 - beta1 * alpha2; }
};

struct SolverConfig {
    int digits = 12;
    int inner_cap = 6;
    int outer_cap = 100;
    /// Perturbation used to build the starting triple; scale-aware default when unset.
    std::optional<Complex> seed_delta;
    double residual_tol = 1e-6;
    /// Threshold for the "one function vanished first" exit; derived from the
    /// seed evaluations when unset.
    std::optional<double> zero_tol;
    Variant variant = Variant::M1;
    EquationOrder order = EquationOrder::AsGiven;
    std::optional<Recombination> recombine;

    /// Throws Error{InvalidConfig} when an invariant is broken.
    void validate() const;

    double step_tol() const;
};

/// Default perturbation 1e-3 (1 + |start|) e^{i pi/4}.
Complex default_delta(double scale);

struct IterationRecord {
    int index = 0;
    Complex x;
    Complex y;
    double f1_abs = 0.0;
    double f2_abs = 0.0;
    double step_x = 0.0;
    double step_y = 0.0;
    int inner_iters_used = 0;
};

enum class Status {
    Converged,
    ConvergedOneZero,
    MaxOuterIterations,
    InnerDivergence,
    EvaluationFailure,
    DegenerateGeometry,
    JacobianBreakdown,
    SingularJacobian,
    SingularUpdate,
    Stalled,
};

std::string_view to_string(Status status);
std::optional<Status> parse_status(std::string_view text);

inline bool is_converged(Status s) {
    return s == Status::Converged || s == Status::ConvergedOneZero;
}

struct RootResult {
    Complex x;
    Complex y;
    Status status = Status::MaxOuterIterations;
    std::vector<IterationRecord> trace;
    std::uint64_t evals_f1 = 0;
    std::uint64_t evals_f2 = 0;
    /// |F1|, |F2| of the original functions at (x, y); negative when unknown.
    double f1_abs = -1.0;
    double f2_abs = -1.0;
    /// Human-readable detail for non-converged exits.
    std::string detail;

    int outer_iterations() const { return static_cast<int>(trace.size()); }
    int inner_iterations() const;
};

}  // namespace muller2d
