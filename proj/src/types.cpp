#include "muller2d/types.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace muller2d {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PrecondViolation: return "PrecondViolation";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::DegenerateStep: return "DegenerateStep";
        case ErrorKind::DegenerateGeometry: return "DegenerateGeometry";
        case ErrorKind::EvaluationFailure: return "EvaluationFailure";
        case ErrorKind::CFNonConvergence: return "CFNonConvergence";
    }
    return "Unknown";
}

namespace {

constexpr std::array<std::pair<Status, std::string_view>, 10> kStatusNames{{
    {Status::Converged, "Converged"},
    {Status::ConvergedOneZero, "ConvergedOneZero"},
    {Status::MaxOuterIterations, "MaxOuterIterations"},
    {Status::InnerDivergence, "InnerDivergence"},
    {Status::EvaluationFailure, "EvaluationFailure"},
    {Status::DegenerateGeometry, "DegenerateGeometry"},
    {Status::JacobianBreakdown, "JacobianBreakdown"},
    {Status::SingularJacobian, "SingularJacobian"},
    {Status::SingularUpdate, "SingularUpdate"},
    {Status::Stalled, "Stalled"},
}};

}  // namespace

std::string_view to_string(Status status) {
    for (const auto& [s, name] : kStatusNames) {
        if (s == status) return name;
    }
    return "Unknown";
}

std::optional<Status> parse_status(std::string_view text) {
    for (const auto& [s, name] : kStatusNames) {
        if (name == text) return s;
    }
    return std::nullopt;
}

void SolverConfig::validate() const {
    auto fail = [](const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); };
    if (digits < 1) fail("digits must be >= 1");
    if (inner_cap < 1) fail("inner_cap must be >= 1");
    if (outer_cap < 1) fail("outer_cap must be >= 1");
    if (!(residual_tol > 0.0)) fail("residual_tol must be > 0");
    if (zero_tol && !(*zero_tol > 0.0)) fail("zero_tol must be > 0");
    if (seed_delta && !(std::abs(*seed_delta) > 0.0)) fail("seed_delta must be nonzero");
    if (seed_delta && !is_finite(*seed_delta)) fail("seed_delta must be finite");
    if (recombine && !(std::abs(recombine->determinant()) > 1e-12)) {
        fail("recombination matrix is singular");
    }
}

double SolverConfig::step_tol() const { return std::pow(10.0, -digits); }

Complex default_delta(double scale) {
    return 1e-3 * (1.0 + scale) * Complex(1.0, 1.0) / std::numbers::sqrt2;
}

int RootResult::inner_iterations() const {
    int total = 0;
    for (const auto& r : trace) total += r.inner_iters_used;
    return total;
}

}  // namespace muller2d
