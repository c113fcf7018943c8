#include "muller2d/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "muller2d/baselines.hpp"
#include "muller2d/muller1d.hpp"
#include "muller2d/muller2d.hpp"

namespace muller2d {

namespace {

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::optional<Complex> parse_complex(std::string_view text) {
    if (text.empty()) return std::nullopt;
    if (text.back() != 'i') {
        const auto re = parse_double(text);
        if (!re) return std::nullopt;
        return Complex(*re, 0.0);
    }
    const std::string_view body = text.substr(0, text.size() - 1);
    // Split at the last sign that is not an exponent sign and not leading.
    std::size_t cut = std::string_view::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    auto imag_part = [](std::string_view s) -> std::optional<double> {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        if (s.front() == '+') s.remove_prefix(1);
        return parse_double(s);
    };
    if (cut == std::string_view::npos) {
        const auto im = imag_part(body);
        if (!im) return std::nullopt;
        return Complex(0.0, *im);
    }
    std::string_view re_text = body.substr(0, cut);
    if (re_text.front() == '+') re_text.remove_prefix(1);
    const auto re = parse_double(re_text);
    const auto im = imag_part(body.substr(cut));
    if (!re || !im) return std::nullopt;
    return Complex(*re, *im);
}

std::optional<PointPair> parse_pair(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 2) return std::nullopt;
    const auto x = parse_complex(parts[0]);
    const auto y = parse_complex(parts[1]);
    if (!x || !y) return std::nullopt;
    return PointPair{*x, *y};
}

std::optional<Recombination> parse_recombination(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 4) return std::nullopt;
    Complex v[4];
    for (int k = 0; k < 4; ++k) {
        const auto z = parse_complex(parts[k]);
        if (!z) return std::nullopt;
        v[k] = *z;
    }
    return Recombination{v[0], v[1], v[2], v[3]};
}

std::string format_complex(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e%+.16ei", z.real(), z.imag());
    return buf;
}

std::string_view to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::Muller2dM1: return "muller2d-m1";
        case SolverKind::Muller2dM2: return "muller2d-m2";
        case SolverKind::Broyden: return "broyden";
        case SolverKind::Newton: return "newton";
        case SolverKind::Muller1d: return "muller1d";
    }
    return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view text) {
    for (auto k : {SolverKind::Muller2dM1, SolverKind::Muller2dM2, SolverKind::Broyden,
                   SolverKind::Newton, SolverKind::Muller1d}) {
        if (to_string(k) == text) return k;
    }
    return std::nullopt;
}

std::vector<SolverKind> all_solvers() {
    return {SolverKind::Muller2dM1, SolverKind::Muller2dM2, SolverKind::Broyden, SolverKind::Newton};
}

RootResult run_solver(SolverKind kind, BivariateSystem& sys, PointPair start,
                      const SolverConfig& cfg) {
    switch (kind) {
        case SolverKind::Muller2dM1:
        case SolverKind::Muller2dM2: {
            SolverConfig c = cfg;
            c.variant = kind == SolverKind::Muller2dM1 ? Variant::M1 : Variant::M2;
            return muller2d_solve(sys, start, c);
        }
        case SolverKind::Broyden: return broyden_solve(sys, start, cfg);
        case SolverKind::Newton: return newton_fd_solve(sys, start, cfg);
        case SolverKind::Muller1d: break;
    }

    cfg.validate();
    const std::uint64_t base_f1 = sys.evals_f1();
    const std::uint64_t base_f2 = sys.evals_f2();
    RootResult r;
    r.x = start.x;
    r.y = start.y;
    try {
        const Complex delta = cfg.seed_delta.value_or(default_delta(std::abs(start.x)));
        const Complex y = start.y;
        const auto m = muller1d_from([&](Complex t) { return sys.f2(t, y); },
                                     {start.x - delta, start.x, start.x + delta}, cfg.outer_cap,
                                     cfg.digits);
        r.x = m.status == Muller1dStatus::Converged ? m.root : m.last;
        r.f2_abs = std::abs(m.f_last);
        switch (m.status) {
            case Muller1dStatus::Converged:
                r.status = r.f2_abs < cfg.residual_tol ? Status::Converged : Status::Stalled;
                break;
            case Muller1dStatus::MaxIterations: r.status = Status::MaxOuterIterations; break;
            case Muller1dStatus::DegenerateStep: r.status = Status::InnerDivergence; break;
        }
        IterationRecord rec;
        rec.index = 1;
        rec.x = r.x;
        rec.y = y;
        rec.f1_abs = 0.0;
        rec.f2_abs = r.f2_abs;
        rec.inner_iters_used = m.iterations;
        r.trace.push_back(rec);
    } catch (const EvaluationError& e) {
        r.status = Status::EvaluationFailure;
        r.detail = e.what();
    } catch (const Error& e) {
        r.status = Status::InnerDivergence;
        r.detail = e.what();
    }
    r.evals_f1 = sys.evals_f1() - base_f1;
    r.evals_f2 = sys.evals_f2() - base_f2;
    return r;
}

int exit_code(Status status) {
    if (is_converged(status)) return 0;
    if (status == Status::EvaluationFailure) return 3;
    return 2;
}

std::string result_json(const std::string& problem, SolverKind solver, const RootResult& r,
                        bool include_trace) {
    using nlohmann::ordered_json;
    auto complex_obj = [](Complex z) { return ordered_json{{"re", z.real()}, {"im", z.imag()}}; };
    auto residual = [](double v) { return v < 0.0 ? ordered_json(nullptr) : ordered_json(v); };
    ordered_json j;
    j["problem"] = problem;
    j["solver"] = std::string(to_string(solver));
    j["status"] = std::string(to_string(r.status));
    j["x"] = complex_obj(r.x);
    j["y"] = complex_obj(r.y);
    j["residuals"] = {{"f1", residual(r.f1_abs)}, {"f2", residual(r.f2_abs)}};
    j["iterations"] = {{"outer", r.outer_iterations()}, {"inner", r.inner_iterations()}};
    j["evals"] = {{"f1", r.evals_f1}, {"f2", r.evals_f2}};
    j["detail"] = r.detail;
    if (include_trace) {
        ordered_json rows = ordered_json::array();
        for (const auto& t : r.trace) {
            rows.push_back({{"n", t.index},
                            {"x", complex_obj(t.x)},
                            {"y", complex_obj(t.y)},
                            {"f1_abs", t.f1_abs},
                            {"f2_abs", t.f2_abs},
                            {"step_x", t.step_x},
                            {"step_y", t.step_y},
                            {"inner_iters", t.inner_iters_used}});
        }
        j["trace"] = std::move(rows);
    }
    return j.dump(2);
}

void write_trace_csv(std::ostream& out, const RootResult& r) {
    out << kTraceHeader << '\n';
    for (const auto& t : r.trace) {
        out << t.index << ',' << num(t.x.real()) << ',' << num(t.x.imag()) << ','
            << num(t.y.real()) << ',' << num(t.y.imag()) << ',' << num(t.f1_abs) << ','
            << num(t.f2_abs) << ',' << num(t.step_x) << ',' << num(t.step_y) << ','
            << t.inner_iters_used << '\n';
    }
}

std::optional<std::vector<Problem>> bench_problems(const std::string& set,
                                                   const KeyValues& overrides) {
    std::vector<Problem> out;
    if (set == "corpus") return corpus();
    if (set == "schwarzschild") {
        for (int n : {0, 1, 2, 3, 4, 5, 6, 7, 9, 10}) {
            out.push_back(*make_problem("schwarzschild-l2-n" + std::to_string(n), overrides));
        }
        return out;
    }
    if (set == "kerr") {
        for (int r = 1; r <= 3; ++r) {
            out.push_back(*make_problem("kerr-s-1-R" + std::to_string(r), overrides));
        }
        return out;
    }
    return std::nullopt;
}

std::vector<BenchCell> run_bench(const std::vector<Problem>& problems,
                                 const std::vector<SolverKind>& solvers, const SolverConfig& cfg) {
    std::vector<SolverKind> order = solvers;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    std::vector<BenchCell> cells;
    for (const auto& p : problems) {
        for (auto kind : order) {
            BivariateSystem sys = p.make();
            const auto t0 = std::chrono::steady_clock::now();
            BenchCell cell;
            cell.problem = p.name;
            cell.solver = kind;
            cell.result = run_solver(kind, sys, p.start, cfg);
            cell.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                          .count();
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells) {
    out << kBenchHeader << '\n';
    for (const auto& c : cells) {
        const auto& r = c.result;
        char ms[32];
        std::snprintf(ms, sizeof ms, "%.3f", c.ms);
        out << c.problem << ',' << to_string(c.solver) << ',' << to_string(r.status) << ','
            << num(r.x.real()) << ',' << num(r.x.imag()) << ',' << num(r.y.real()) << ','
            << num(r.y.imag()) << ',' << num(r.f1_abs) << ',' << num(r.f2_abs) << ','
            << r.outer_iterations() << ',' << r.inner_iterations() << ',' << r.evals_f1 << ','
            << r.evals_f2 << ',' << ms << '\n';
    }
}

void write_bench_table(std::ostream& out, const std::vector<BenchCell>& cells) {
    char line[256];
    std::snprintf(line, sizeof line, "%-22s %-12s %-19s %-44s %9s %9s %6s %6s %7s %7s\n", "problem",
                  "solver", "status", "x", "|F1|", "|F2|", "outer", "inner", "ev_F1", "ev_F2");
    out << line;
    for (const auto& c : cells) {
        const auto& r = c.result;
        std::snprintf(line, sizeof line, "%-22s %-12s %-19s %-44s %9.2e %9.2e %6d %6d %7llu %7llu\n",
                      c.problem.c_str(), std::string(to_string(c.solver)).c_str(),
                      std::string(to_string(r.status)).c_str(), format_complex(r.x).c_str(),
                      r.f1_abs, r.f2_abs, r.outer_iterations(), r.inner_iterations(),
                      static_cast<unsigned long long>(r.evals_f1),
                      static_cast<unsigned long long>(r.evals_f2));
        out << line;
    }
}

bool bench_required_cells_converged(const std::vector<BenchCell>& cells) {
    return std::all_of(cells.begin(), cells.end(), [](const BenchCell& c) {
        const bool required = c.solver == SolverKind::Muller2dM1 || c.solver == SolverKind::Muller2dM2;
        return !required || is_converged(c.result.status);
    });
}

}  // namespace muller2d
