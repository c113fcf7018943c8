#include "muller2d/special.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace muller2d {

namespace {

// Lanczos, g = 7, n = 9.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

Complex rgamma_right(Complex z) {
    z -= 1.0;
    Complex a = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (z + static_cast<double>(i));
    const Complex t = z + kG + 0.5;
    const double sqrt_2pi = std::sqrt(2.0 * std::numbers::pi);
    return std::exp(t - (z + 0.5) * std::log(t)) / (sqrt_2pi * a);
}

// sin(pi x), cos(pi x) with exact zeros at the (half-)integers
double sin_pi(double x) {
    const double r = x - 2.0 * std::round(x / 2.0);  // [-1, 1]
    if (r == std::trunc(r)) return 0.0;
    if (std::abs(r) == 0.5) return r > 0 ? 1.0 : -1.0;
    return std::sin(std::numbers::pi * r);
}

double cos_pi(double x) {
    const double r = x - 2.0 * std::round(x / 2.0);
    if (std::abs(r) == 0.5) return 0.0;
    if (r == 0.0) return 1.0;
    if (std::abs(r) == 1.0) return -1.0;
    return std::cos(std::numbers::pi * r);
}

Complex sin_pi(Complex z) {
    const double b = std::numbers::pi * z.imag();
    return {sin_pi(z.real()) * std::cosh(b), cos_pi(z.real()) * std::sinh(b)};
}

}  // namespace

Complex rgamma(Complex z) {
    if (z.real() >= 0.5) return rgamma_right(z);
    // 1/Gamma(z) = Gamma(1 - z) sin(pi z) / pi
    const double pi = std::numbers::pi;
    return sin_pi(z) / (pi * rgamma_right(1.0 - z));
}

Complex integer_root_factor(Complex l) { return -std::numbers::pi * rgamma(2.0 - l); }

}  // namespace muller2d
