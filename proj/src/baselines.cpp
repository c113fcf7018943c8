#include "muller2d/baselines.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

namespace muller2d {

Real4 to_real(const PointPair& p) { return {p.x.real(), p.x.imag(), p.y.real(), p.y.imag()}; }

PointPair from_real(const Real4& v) { return {{v[0], v[1]}, {v[2], v[3]}}; }

Real4 residual_to_real(Complex f1, Complex f2) { return {f1.real(), f1.imag(), f2.real(), f2.imag()}; }

double fd_step(double v) { return std::exp2(std::round(std::log2(1e-7 * (1.0 + std::abs(v))))); }

namespace {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

constexpr double kSingularCondition = 1e12;

Vec4 vec(const Real4& a) { return Vec4(a[0], a[1], a[2], a[3]); }
Real4 arr(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

Real4x4 flatten(const Mat4& m) {
    Real4x4 out{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out[4 * r + c] = m(r, c);
    return out;
}

struct JacobianFailure {
    std::string what;
};

struct SingularStep {};

class RealSystem {
public:
    explicit RealSystem(BivariateSystem& sys) : sys_(sys) {}

    Vec4 residual(const Vec4& v) {
        const PointPair p = from_real(arr(v));
        const Complex a = sys_.f1(p.x, p.y);
        const Complex b = sys_.f2(p.x, p.y);
        return vec(residual_to_real(a, b));
    }

    Mat4 fd_jacobian(const Vec4& v, const Vec4& f) {
        Mat4 j;
        for (int k = 0; k < 4; ++k) {
            Vec4 shifted = v;
            const double h = fd_step(v[k]);
            shifted[k] += h;
            Vec4 fk;
            try {
                fk = residual(shifted);
            } catch (const EvaluationError& e) {
                throw JacobianFailure{std::string("finite-difference stencil failed: ") + e.what()};
            }
            j.col(k) = (fk - f) / (shifted[k] - v[k]);
        }
        if (!j.allFinite()) throw JacobianFailure{"finite-difference Jacobian has non-finite entries"};
        return j;
    }

private:
    BivariateSystem& sys_;
};

Vec4 newton_step(const Mat4& j, const Vec4& f) {
    Eigen::JacobiSVD<Mat4> svd(j);
    const auto& sv = svd.singularValues();
    if (!(sv[3] > 0.0) || !(sv[0] / sv[3] <= kSingularCondition)) throw SingularStep{};
    return j.partialPivLu().solve(-f);
}

IterationRecord make_record(int index, const Vec4& prev, const Vec4& next, const Vec4& f) {
    const PointPair a = from_real(arr(prev));
    const PointPair b = from_real(arr(next));
    IterationRecord rec;
    rec.index = index;
    rec.x = b.x;
    rec.y = b.y;
    rec.f1_abs = std::hypot(f[0], f[1]);
    rec.f2_abs = std::hypot(f[2], f[3]);
    rec.step_x = std::abs(b.x - a.x);
    rec.step_y = std::abs(b.y - a.y);
    return rec;
}

/// Shared driver: `next` proposes the following iterate (and its residual)
/// and returns false to stop with the status it already stored.
template <typename Init, typename Next>
RootResult run_baseline(BivariateSystem& sys, PointPair start, const SolverConfig& cfg, Init init,
                        Next next) {
    cfg.validate();
    const std::uint64_t base_f1 = sys.evals_f1();
    const std::uint64_t base_f2 = sys.evals_f2();
    const double tol = cfg.step_tol();
    RealSystem rs(sys);
    RootResult result;
    Vec4 x = vec(to_real(start));
    Vec4 f = Vec4::Zero();

    auto finish = [&](Status status, std::string detail = {}) {
        const PointPair p = from_real(arr(x));
        result.x = p.x;
        result.y = p.y;
        result.status = status;
        result.detail = std::move(detail);
        result.evals_f1 = sys.evals_f1() - base_f1;
        result.evals_f2 = sys.evals_f2() - base_f2;
        return result;
    };

    try {
        f = rs.residual(x);
        result.f1_abs = std::hypot(f[0], f[1]);
        result.f2_abs = std::hypot(f[2], f[3]);
        init(rs, x, f);
        for (int n = 1; n <= cfg.outer_cap; ++n) {
            Vec4 xn;
            Vec4 fn;
            next(rs, n, x, f, xn, fn);
            const IterationRecord rec = make_record(n, x, xn, fn);
            result.trace.push_back(rec);
            const Vec4 dx = xn - x;
            x = xn;
            f = fn;
            result.f1_abs = rec.f1_abs;
            result.f2_abs = rec.f2_abs;
            if (rec.step_x < tol && rec.step_y < tol) {
                if (rec.f1_abs < cfg.residual_tol && rec.f2_abs < cfg.residual_tol) {
                    return finish(Status::Converged);
                }
                return finish(Status::Stalled, "step below tolerance with residuals above it");
            }
            if (!(dx.squaredNorm() >= 1e-300)) {
                return finish(Status::SingularUpdate, "secant update denominator vanished");
            }
        }
    } catch (const JacobianFailure& e) {
        return finish(Status::JacobianBreakdown, e.what);
    } catch (const SingularStep&) {
        return finish(Status::SingularJacobian, "Jacobian condition estimate above 1e12");
    } catch (const EvaluationError& e) {
        return finish(Status::EvaluationFailure, e.what());
    }
    return finish(Status::MaxOuterIterations, "outer iteration cap reached");
}

}  // namespace

RootResult broyden_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                         const BaselineHooks& hooks) {
    Mat4 j = Mat4::Zero();
    auto init = [&](RealSystem& rs, const Vec4& x, const Vec4& f) {
        j = rs.fd_jacobian(x, f);
        if (hooks.on_jacobian) hooks.on_jacobian({0, flatten(j), {}, {}});
    };
    auto next = [&](RealSystem& rs, int n, const Vec4& x, const Vec4& f, Vec4& xn, Vec4& fn) {
        const Vec4 s = newton_step(j, f);
        const double norm0 = f.norm();
        xn = x + s;
        fn = rs.residual(xn);
        if (!(fn.norm() < norm0)) {
            const Vec4 full_x = xn;
            const Vec4 full_f = fn;
            bool improved = false;
            double t = 1.0;
            for (int h = 0; h < 8 && !improved; ++h) {
                t *= 0.5;
                xn = x + t * s;
                fn = rs.residual(xn);
                improved = fn.norm() < norm0;
            }
            if (!improved) {
                xn = full_x;
                fn = full_f;
            }
        }
        const Vec4 dx = xn - x;
        const Vec4 df = fn - f;
        const double denom = dx.squaredNorm();
        if (denom >= 1e-300) {
            j += (df - j * dx) * dx.transpose() / denom;
            if (hooks.on_jacobian) hooks.on_jacobian({n, flatten(j), arr(dx), arr(df)});
        }
    };
    return run_baseline(sys, start, cfg, init, next);
}

RootResult newton_fd_solve(BivariateSystem& sys, PointPair start, const SolverConfig& cfg,
                           const BaselineHooks& hooks) {
    auto init = [](RealSystem&, const Vec4&, const Vec4&) {};
    auto next = [&](RealSystem& rs, int n, const Vec4& x, const Vec4& f, Vec4& xn, Vec4& fn) {
        const Mat4 j = rs.fd_jacobian(x, f);
        if (hooks.on_jacobian) hooks.on_jacobian({n, flatten(j), {}, {}});
        xn = x + newton_step(j, f);
        fn = rs.residual(xn);
    };
    return run_baseline(sys, start, cfg, init, next);
}

}  // namespace muller2d
