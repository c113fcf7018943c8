#pragma once

#include <array>
#include <functional>

#include "muller2d/system.hpp"
#include "muller2d/types.hpp"

namespace muller2d {

/// (Re x, Im x, Re y, Im y), or (Re F1, Im F1, Re F2, Im F2) for residuals.
using Real4 = std::array<double, 4>;
/// Row-major 4x4 real matrix.
using Real4x4 = std::array<double, 16>;

Real4 to_real(const PointPair& p);
PointPair from_real(const Real4& v);
Real4 residual_to_real(Complex f1, Complex f2);

struct JacobianUpdate {
    int iteration = 0;
    /// Jacobian approximation after the update.
    Real4x4 jacobian{};
    Real4 dx{};
    Real4 df{};
};

struct BaselineHooks {
    /// Broyden: after every rank-one update. Newton: after every stencil
    /// (dx, df are zero then).
    std::function<void(const JacobianUpdate&)> on_jacobian;
};

/// Finite-difference step for component v: 1e-7 (1 + |v|), rounded to the
/// nearest power of two so that v + h - v == h exactly.
double fd_step(double v);

/// Broyden's good update on the real 4D view, Jacobian initialized by
/// one-sided differences, step halving (at most 8) when the residual norm
/// does not decrease.
RootResult broyden_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                         const BaselineHooks& hooks = {});

/// Newton's method with a one-sided finite-difference Jacobian rebuilt every
/// iteration: 4 stencil evaluations plus 1 at the accepted point, per function.
RootResult newton_fd_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                           const BaselineHooks& hooks = {});

}  // namespace muller2d
