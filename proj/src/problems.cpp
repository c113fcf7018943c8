#include "muller2d/problems.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "muller2d/special.hpp"

namespace muller2d {

const std::array<Complex, 11> kSchwarzschildReference = {{
    {0.7473433689, 0.177924631},
    {0.6934219938, 0.547829750},
    {0.6021069092, 0.956553966},
    {0.5030099245, 1.410296405},
    {0.4150291596, 1.893689782},
    {0.3385988064, 2.391216108},
    {0.2665046810, 2.895821253},
    {0.1856446684, 3.407682345},
    {0.030649006, 3.996823690},
    {0.1265270180, 4.605289542},
    {0.1531069502, 5.121653272},
}};

const std::array<Complex, 3> kKerrReference = {{
    {0.4965436315, 0.1849695292},
    {0.3495869222, 1.0503235984},
    {0.0608496029, 5.1191008697},
}};

const std::array<int, 3> kKerrInversion = {0, 2, 9};

const std::array<PointPair, 3> kKerrStarts = {{
    {{0.49, 0.18}, {2.001, 0.1}},
    {{0.17, 0.97}, {2.001, 0.1}},
    {{0.069, 5.146}, {2.001, 0.051}},
}};

PointPair schwarzschild_start(int n) {
    return {kSchwarzschildReference.at(static_cast<std::size_t>(n)) + Complex(0.01, 0.01),
            Complex(2.1, 0.01)};
}

void QNMProblemSpec::validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
    if (n < 0 || angular_n < 0) bad("inversion indices must be non-negative");
    if (max_depth <= n || max_depth <= angular_n) bad("depth must exceed the inversion index");
    if (!(cf_tol > 0.0)) bad("cf_tol must be positive");
    if (family == QNMFamily::SchwarzschildRW && a != 0.0) bad("Schwarzschild problems have a = 0");
    if (family == QNMFamily::KerrTeukolsky && !(a >= 0.0 && a < 0.5)) {
        bad("spin must satisfy 0 <= a < M = 1/2");
    }
}

CFProblem schwarzschild_cf(const QNMProblemSpec& spec) {
    const double s2 = static_cast<double>(spec.s) * spec.s;
    CFProblem p;
    // rho = i omega
    p.alpha = [](int n, const Unknowns& u) {
        const Complex rho = Complex(0.0, 1.0) * u[0];
        const double nn = n;
        return nn * nn + (2.0 * rho + 2.0) * nn + 2.0 * rho + 1.0;
    };
    p.beta = [s2](int n, const Unknowns& u) {
        const Complex rho = Complex(0.0, 1.0) * u[0];
        const Complex l = u[1];
        const double nn = n;
        return -(2.0 * nn * nn + (8.0 * rho + 2.0) * nn + 8.0 * rho * rho + 4.0 * rho +
                 l * (l + 1.0) - s2 + 1.0);
    };
    p.gamma = [s2](int n, const Unknowns& u) {
        const Complex rho = Complex(0.0, 1.0) * u[0];
        const double nn = n;
        return nn * nn + 4.0 * rho * nn + 4.0 * rho * rho - s2;
    };
    p.inversion_index = spec.n;
    p.max_depth = spec.max_depth;
    p.cf_tol = spec.cf_tol;
    return p;
}

namespace {

struct KerrRadialCoeffs {
    Complex c0, c1, c2, c3, c4;
};

// The recurrence is written for the opposite sign convention of omega, hence wl = -omega.
KerrRadialCoeffs kerr_radial_coeffs(const QNMProblemSpec& spec, Complex omega, Complex A) {
    const Complex I(0.0, 1.0);
    const double s = spec.s;
    const double a = spec.a;
    const double m = spec.m;
    const double b = std::sqrt(1.0 - 4.0 * a * a);
    const Complex wl = -omega;
    const Complex shift = wl / 2.0 - a * m;
    KerrRadialCoeffs k;
    k.c0 = 1.0 - s - I * wl - (2.0 * I / b) * shift;
    k.c1 = -4.0 + 2.0 * I * wl * (2.0 + b) + (4.0 * I / b) * shift;
    k.c2 = s + 3.0 - 3.0 * I * wl - (2.0 * I / b) * shift;
    k.c3 = wl * wl * (4.0 + 2.0 * b - a * a) - 2.0 * a * m * wl - s - 1.0 + (2.0 + b) * I * wl - A +
           ((4.0 * wl + 2.0 * I) / b) * shift;
    k.c4 = s + 1.0 - 2.0 * wl * wl - (2.0 * s + 3.0) * I * wl - ((4.0 * wl + 2.0 * I) / b) * shift;
    return k;
}

}  // namespace

CFProblem kerr_radial_cf(const QNMProblemSpec& spec) {
    CFProblem p;
    p.alpha = [spec](int n, const Unknowns& u) {
        const auto k = kerr_radial_coeffs(spec, u[0], u[1]);
        const double nn = n;
        return nn * nn + (k.c0 + 1.0) * nn + k.c0;
    };
    p.beta = [spec](int n, const Unknowns& u) {
        const auto k = kerr_radial_coeffs(spec, u[0], u[1]);
        const double nn = n;
        return -2.0 * nn * nn + (k.c1 + 2.0) * nn + k.c3;
    };
    p.gamma = [spec](int n, const Unknowns& u) {
        const auto k = kerr_radial_coeffs(spec, u[0], u[1]);
        const double nn = n;
        return nn * nn + (k.c2 - 3.0) * nn + k.c4 - k.c2 + 2.0;
    };
    p.inversion_index = spec.n;
    p.max_depth = spec.max_depth;
    p.cf_tol = spec.cf_tol;
    return p;
}

CFProblem kerr_angular_cf(const QNMProblemSpec& spec) {
    const double s = spec.s;
    const double k1 = std::abs(spec.m - spec.s) / 2.0;
    const double k2 = std::abs(spec.m + spec.s) / 2.0;
    const double a = spec.a;
    CFProblem p;
    p.alpha = [k1](int n, const Unknowns&) -> Complex {
        const double nn = n;
        return -2.0 * (nn + 1.0) * (nn + 2.0 * k1 + 1.0);
    };
    p.beta = [=](int n, const Unknowns& u) {
        const Complex aw = -a * u[0];
        const double nn = n;
        return nn * (nn - 1.0) + 2.0 * nn * (k1 + k2 + 1.0 - 2.0 * aw) -
               (2.0 * aw * (2.0 * k1 + s + 1.0) - (k1 + k2) * (k1 + k2 + 1.0)) -
               (aw * aw + s * (s + 1.0) + u[1]);
    };
    p.gamma = [=](int n, const Unknowns& u) {
        const Complex aw = -a * u[0];
        return 2.0 * aw * (static_cast<double>(n) + k1 + k2 + s);
    };
    p.inversion_index = spec.angular_n;
    p.max_depth = spec.max_depth;
    p.cf_tol = spec.cf_tol;
    return p;
}

BivariateSystem schwarzschild_system(const QNMProblemSpec& spec) {
    if (spec.family != QNMFamily::SchwarzschildRW) {
        throw Error(ErrorKind::PrecondViolation, "schwarzschild_system: wrong family");
    }
    spec.validate();
    CFProblem cf = schwarzschild_cf(spec);
    return BivariateSystem(
        "schwarzschild",
        [](Complex, Complex l) { return integer_root_factor(l); },
        [cf](Complex w, Complex l) { return cf_eval(cf, {w, l}); });
}

BivariateSystem kerr_system(const QNMProblemSpec& spec) {
    if (spec.family != QNMFamily::KerrTeukolsky) {
        throw Error(ErrorKind::PrecondViolation, "kerr_system: wrong family");
    }
    spec.validate();
    CFProblem radial = kerr_radial_cf(spec);
    CFProblem angular = kerr_angular_cf(spec);
    return BivariateSystem(
        "kerr",
        [radial](Complex w, Complex A) { return cf_eval(radial, {w, A}); },
        [angular](Complex w, Complex A) { return cf_eval(angular, {w, A}); });
}

std::vector<Problem> corpus() {
    std::vector<Problem> out;

    out.push_back({"affine", "C1", "x + y - 3, x - y - 1",
                   [] {
                       return BivariateSystem(
                           "affine", [](Complex x, Complex y) { return x + y - 3.0; },
                           [](Complex x, Complex y) { return x - y - 1.0; });
                   },
                   {{{2.0, 0.0}, {1.0, 0.0}}},
                   {{0.0, 0.0}, {0.0, 0.0}}});

    out.push_back({"circle-line", "C2", "x^2 + y^2 - 2, x - y",
                   [] {
                       return BivariateSystem(
                           "circle-line", [](Complex x, Complex y) { return x * x + y * y - 2.0; },
                           [](Complex x, Complex y) { return x - y; });
                   },
                   {{{1.0, 0.0}, {1.0, 0.0}}, {{-1.0, 0.0}, {-1.0, 0.0}}},
                   {{0.8, 0.0}, {0.9, 0.0}}});

    // F1 depends on y alone and vanishes on the integers.
    out.push_back({"integer-root", "C3", "sin(pi y), exp(x) + x y - 7",
                   [] {
                       return BivariateSystem(
                           "integer-root",
                           [](Complex, Complex y) { return std::sin(std::numbers::pi * y); },
                           [](Complex x, Complex y) { return std::exp(x) + x * y - 7.0; });
                   },
                   {{{1.4237233824399963, 0.0}, {2.0, 0.0}},
                    {{1.6728216986289065, 0.0}, {1.0, 0.0}},
                    {{1.2125976333300713, 0.0}, {3.0, 0.0}}},
                   {{1.3, 0.0}, {2.1, 0.0}}});

    out.push_back({"trig-coupled", "C4", "sin x + y, x + cos y - 2",
                   [] {
                       return BivariateSystem(
                           "trig-coupled", [](Complex x, Complex y) { return std::sin(x) + y; },
                           [](Complex x, Complex y) { return x + std::cos(y) - 2.0; });
                   },
                   {{{1.4539749388736957, 0.0}, {-0.99318413842726005, 0.0}}},
                   {{1.3, 0.0}, {-0.8, 0.0}}});

    constexpr double kRadius = 0.5;
    out.push_back({"failure-disk", "C5", "x y - 2, x - 2 y; fails for |x| < 0.5",
                   [] {
                       auto guard = [](Complex x) {
                           if (std::abs(x) < kRadius) throw std::domain_error("inside failure disk");
                       };
                       return BivariateSystem(
                           "failure-disk",
                           [guard](Complex x, Complex y) {
                               guard(x);
                               return x * y - 2.0;
                           },
                           [guard](Complex x, Complex y) {
                               guard(x);
                               return x - 2.0 * y;
                           });
                   },
                   {{{2.0, 0.0}, {1.0, 0.0}}, {{-2.0, 0.0}, {-1.0, 0.0}}},
                   {{1.5, 0.1}, {0.8, 0.0}},
                   kRadius});
    return out;
}

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const auto& p : corpus()) names.push_back(p.name);
    for (int n = 0; n <= 10; ++n) names.push_back("schwarzschild-l2-n" + std::to_string(n));
    for (int r = 1; r <= 3; ++r) names.push_back("kerr-s-1-R" + std::to_string(r));
    return names;
}

namespace {

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw Error(ErrorKind::InvalidConfig, "bad integer for " + key + ": '" + v + "'");
    }
    return out;
}

double parse_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used == v.size() && std::isfinite(out)) return out;
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidConfig, "bad number for " + key + ": '" + v + "'");
}

void apply_overrides(QNMProblemSpec& spec, const KeyValues& kv) {
    for (const auto& [key, value] : kv) {
        if (key == "s") spec.s = parse_int(key, value);
        else if (key == "a") spec.a = parse_real(key, value);
        else if (key == "m") spec.m = parse_int(key, value);
        else if (key == "n") spec.n = parse_int(key, value);
        else if (key == "angular_n") spec.angular_n = parse_int(key, value);
        else if (key == "depth") spec.max_depth = parse_int(key, value);
        else if (key == "cf_tol") spec.cf_tol = parse_real(key, value);
    }
    spec.validate();
}

std::optional<int> suffix_index(const std::string& name, const std::string& prefix) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return std::nullopt;
    int out = 0;
    const char* first = name.data() + prefix.size();
    const char* last = name.data() + name.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return out;
}

}  // namespace

std::optional<Problem> make_problem(const std::string& name, const KeyValues& overrides) {
    for (auto& p : corpus()) {
        if (p.name == name || p.id == name) return p;
    }

    if (auto n = suffix_index(name, "schwarzschild-l2-n"); n && *n >= 0 && *n <= 10) {
        QNMProblemSpec spec;
        spec.n = *n;
        apply_overrides(spec, overrides);
        Problem p;
        p.name = name;
        p.description = "Regge-Wheeler l = 2, overtone " + std::to_string(*n) + "; unknowns (omega, l)";
        p.make = [spec] { return schwarzschild_system(spec); };
        p.roots = {{kSchwarzschildReference[*n], 2.0}};
        p.start = schwarzschild_start(*n);
        return p;
    }

    if (auto r = suffix_index(name, "kerr-s-1-R"); r && *r >= 1 && *r <= 3) {
        QNMProblemSpec spec;
        spec.family = QNMFamily::KerrTeukolsky;
        spec.s = -1;
        spec.a = 0.01;
        spec.m = 0;
        spec.n = kKerrInversion[*r - 1];
        apply_overrides(spec, overrides);
        Problem p;
        p.name = name;
        p.description = "Teukolsky s = -1, a = 0.01, m = 0, row " + std::to_string(*r) +
                        "; unknowns (omega, A)";
        p.make = [spec] { return kerr_system(spec); };
        p.roots = {{kKerrReference[*r - 1], 2.0}};
        p.start = kKerrStarts[*r - 1];
        return p;
    }
    return std::nullopt;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidConfig,
                        "config line " + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw Error(ErrorKind::InvalidConfig,
                        "config line " + std::to_string(lineno) + ": empty key");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

}  // namespace muller2d
