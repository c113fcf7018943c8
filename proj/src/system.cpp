#include "muller2d/system.hpp"

#include <exception>
#include <sstream>
#include <utility>

namespace muller2d {

BivariateSystem::BivariateSystem(std::string name, BivariateFn f1, BivariateFn f2)
    : name_(std::move(name)), fns_{std::move(f1), std::move(f2)} {}

namespace {

std::string describe(int which, Complex x, Complex y, const std::string& why) {
    std::ostringstream os;
    os.precision(17);
    os << "F" << which << " failed at (" << x << ", " << y << "): " << why;
    return os.str();
}

}  // namespace

Complex BivariateSystem::eval(int which, Complex x, Complex y) {
    const int idx = which == 1 ? 0 : 1;
    ++evals_[idx];
    Complex value;
    try {
        value = fns_[idx](x, y);
    } catch (const EvaluationError& e) {
        throw EvaluationError(describe(which, x, y, e.what()), which, x, y);
    } catch (const std::exception& e) {
        throw EvaluationError(describe(which, x, y, e.what()), which, x, y);
    }
    if (!is_finite(value)) {
        throw EvaluationError(describe(which, x, y, "non-finite value"), which, x, y);
    }
    return value;
}

}  // namespace muller2d
