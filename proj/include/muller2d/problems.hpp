#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "muller2d/continued_fraction.hpp"
#include "muller2d/system.hpp"

namespace muller2d {

enum class QNMFamily { SchwarzschildRW, KerrTeukolsky };

/// Black-hole perturbation problem in units 2M = 1.
struct QNMProblemSpec {
    QNMFamily family = QNMFamily::SchwarzschildRW;
    int s = 2;
    double a = 0.0;
    int m = 0;
    /// Overtone hint: the inversion index of the continued fraction in omega.
    int n = 0;
    /// Inversion index of the Kerr angular fraction.
    int angular_n = 0;
    int max_depth = 100000;
    double cf_tol = 1e-14;

    /// Throws Error{InvalidConfig}.
    void validate() const;
};

/// Regge-Wheeler recurrence in unknowns (omega, l), s from the spec.
CFProblem schwarzschild_cf(const QNMProblemSpec& spec);
/// Teukolsky radial recurrence in unknowns (omega, A).
CFProblem kerr_radial_cf(const QNMProblemSpec& spec);
/// Spin-weighted spheroidal recurrence in unknowns (omega, A).
CFProblem kerr_angular_cf(const QNMProblemSpec& spec);

/// F1 = sin(pi l) Gamma(l - 1) (integer roots l >= 2, independent of omega),
/// F2 = the Regge-Wheeler continued fraction.
BivariateSystem schwarzschild_system(const QNMProblemSpec& spec);
/// F1 = radial fraction, F2 = angular fraction, both in (omega, A).
BivariateSystem kerr_system(const QNMProblemSpec& spec);

/// Published l = 2 gravitational frequencies, n = 0..10, 2M = 1.
extern const std::array<Complex, 11> kSchwarzschildReference;
/// Kerr s = -1, a = 0.01, m = 0 frequencies for rows R = 1, 2, 3.
extern const std::array<Complex, 3> kKerrReference;
/// Radial inversion index used for each Kerr row.
extern const std::array<int, 3> kKerrInversion;
/// Starting pairs for the Kerr rows.
extern const std::array<PointPair, 3> kKerrStarts;

/// Benchmark start for overtone n: (omega_n + 0.01 + 0.01i, 2.1 + 0.01i).
PointPair schwarzschild_start(int n);

using KeyValues = std::map<std::string, std::string>;

struct Problem {
    std::string name;
    /// Corpus label (C1..C5) or empty for QNM presets.
    std::string id;
    std::string description;
    std::function<BivariateSystem()> make;
    /// Known roots; only the first coordinate is meaningful for the Kerr rows.
    std::vector<PointPair> roots;
    PointPair start;
    /// Disk |x| < failure_radius where the functions signal failure (C5 only).
    double failure_radius = 0.0;
};

/// C1 affine, C2 circle-line, C3 integer-root pathology, C4 trigonometric
/// coupling, C5 evaluation-failure disk.
std::vector<Problem> corpus();

/// Names accepted by make_problem.
std::vector<std::string> problem_names();

/// Corpus names plus presets schwarzschild-l2-n<k> (k = 0..10) and
/// kerr-s-1-R<r> (r = 1..3). Overrides (s, a, m, n, angular_n, depth,
/// cf_tol) apply to QNM presets. Returns nullopt for unknown names; throws
/// Error{InvalidConfig} for bad override values.
std::optional<Problem> make_problem(const std::string& name, const KeyValues& overrides = {});

/// Parses "key=value" lines; '#' starts a comment, blank lines ignored.
/// Throws Error{InvalidConfig} naming the offending line.
KeyValues parse_key_values(const std::string& text);

}  // namespace muller2d
