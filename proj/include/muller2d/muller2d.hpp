#pragma once

#include <array>
#include <functional>

#include "muller2d/muller1d.hpp"
#include "muller2d/system.hpp"
#include "muller2d/types.hpp"

namespace muller2d {

/// Coefficients of the plane z = c1 x + c2 y + c3.
struct PlaneCoeffs {
    Complex c1;
    Complex c2;
    Complex c3;
};

/// The starting triple {(x0 - d, y0 - d), (x0, y0), (x0 + d, y0 + d)}.
/// Throws Error{PrecondViolation} when |d| == 0.
std::array<PointPair, 3> seed_points(PointPair start, Complex delta);

/// The triple the 2D solver actually starts from. seed_points() lies on a
/// complex line in C^2, which makes the first plane fit singular; here the
/// third pair's y offset is rotated by i: {(x0 - d, y0 - d), (x0, y0), (x0 + d, y0 + i d)}.
std::array<PointPair, 3> solver_seed_points(PointPair start, Complex delta);

struct PlaneFit {
    PlaneCoeffs coeffs;
    /// Ratio of largest to smallest pivot of the row-scaled elimination.
    double condition = 0.0;
};

inline constexpr double kPlaneConditionLimit = 1e12;

/// Solves c1 x_i + c2 y_i + c3 = f_i for the three points. Throws
/// Error{DegenerateGeometry} when the pivot-ratio condition estimate exceeds
/// kPlaneConditionLimit.
PlaneFit fit_plane_with_condition(const PointPair& p1, const PointPair& p2, const PointPair& p3,
                                  Complex f1, Complex f2, Complex f3);

inline PlaneCoeffs fit_plane(const PointPair& p1, const PointPair& p2, const PointPair& p3,
                             Complex f1, Complex f2, Complex f3) {
    return fit_plane_with_condition(p1, p2, p3, f1, f2, f3).coeffs;
}

/// Line of intersection of a plane with z = 0, as an affine map.
/// Normal form: y = slope * x + intercept. Transposed form: x = slope * y + intercept.
struct LinearRelation {
    bool transposed = false;
    Complex slope;
    Complex intercept;

    Complex operator()(Complex t) const { return slope * t + intercept; }
};

/// |c2| at or below this fraction of |c1| switches to the transposed form.
inline constexpr double kTransposeThreshold = 1e-8;

/// y(x) = (-c1 x - c3) / c2, or x(y) = (-c2 y - c3) / c1 when c2 is negligible.
/// Throws Error{DegenerateGeometry} when both |c1| and |c2| are below
/// 1e-14 (1 + |c3|).
LinearRelation intersect_zero_plane(const PlaneCoeffs& c);

/// Per-iteration diagnostics, for instrumentation and tests.
struct IterationDiagnostics {
    int index = 0;
    /// Index (1 or 2) of the working function the plane was fit to.
    int plane_function = 2;
    PlaneCoeffs plane;
    LinearRelation relation;
    bool reused_plane = false;
    /// The plane was fit to the other function because the designated one
    /// gave no usable plane.
    bool role_swapped = false;
    int inner_evals = 0;
    PointPair pair;
    bool one_zero_polish = false;
};

struct Muller2dHooks {
    std::function<void(const IterationDiagnostics&)> on_iteration;
};

/// The two-dimensional Muller iteration: plane fit to one function, its zero
/// line as an approximate relation between the unknowns, and inner 1D Muller
/// solves along it (variant M1 reads the second unknown off the line, M2
/// solves for it with a second inner run). Never throws on numerical trouble;
/// the outcome is in RootResult::status.
RootResult muller2d_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                          const Muller2dHooks& hooks = {});

}  // namespace muller2d
