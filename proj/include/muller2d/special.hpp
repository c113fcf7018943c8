#pragma once

#include "muller2d/types.hpp"

namespace muller2d {

/// 1 / Gamma(z), entire in z (exact zeros at z = 0, -1, -2, ...).
Complex rgamma(Complex z);

/// sin(pi l) Gamma(l - 1) = -pi / Gamma(2 - l). Entire in l, zero exactly at
/// the integers l >= 2, equal to -pi at l = 1.
Complex integer_root_factor(Complex l);

}  // namespace muller2d
