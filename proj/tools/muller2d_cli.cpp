#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "muller2d/problems.hpp"
#include "muller2d/report.hpp"

using namespace muller2d;

namespace {

constexpr int kExitBadArgs = 4;
constexpr int kExitIo = 5;

struct BadArgument : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string problem;
    std::string solver = "muller2d-m1";
    std::string start;
    std::string variant;
    std::string order;
    std::optional<int> digits;
    std::optional<int> inner_cap;
    std::optional<int> outer_cap;
    std::string delta;
    std::optional<double> residual_tol;
    std::optional<double> zero_tol;
    std::string recombine;
    std::optional<int> depth;
    std::string config;
    std::vector<std::string> params;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--variant", o.variant, "M1 or M2 (muller2d only; overrides the solver name)");
    cmd->add_option("--order", o.order, "as-given | swapped | alternate");
    cmd->add_option("--digits", o.digits, "Target digits d (stop when step < 10^-d)");
    cmd->add_option("--inner-cap", o.inner_cap, "Inner Muller iteration cap P");
    cmd->add_option("--outer-cap", o.outer_cap, "Outer iteration cap N");
    cmd->add_option("--delta", o.delta, "Seed perturbation, complex literal");
    cmd->add_option("--residual-tol", o.residual_tol, "Residual threshold");
    cmd->add_option("--zero-tol", o.zero_tol, "One-function-zero threshold");
    cmd->add_option("--recombine", o.recombine, "alpha1,beta1,alpha2,beta2");
    cmd->add_option("--depth", o.depth, "Continued-fraction depth for QNM problems");
    cmd->add_option("--config", o.config, "key=value file with defaults for any of the above");
    cmd->add_option("--param", o.params, "Problem override key=value (s, a, m, n, angular_n, cf_tol)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int out = std::stoi(v, &used);
        if (used == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw BadArgument("invalid integer for " + key + ": '" + v + "'");
}

double to_real(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double out = std::stod(v, &used);
        if (used == v.size()) return out;
    } catch (const std::exception&) {
    }
    throw BadArgument("invalid number for " + key + ": '" + v + "'");
}

Variant parse_variant(const std::string& flag, const std::string& v) {
    if (v == "M1" || v == "m1") return Variant::M1;
    if (v == "M2" || v == "m2") return Variant::M2;
    throw BadArgument(flag + ": expected M1 or M2, got '" + v + "'");
}

EquationOrder parse_order(const std::string& flag, const std::string& v) {
    if (v == "as-given" || v == "AsGiven") return EquationOrder::AsGiven;
    if (v == "swapped" || v == "Swapped") return EquationOrder::Swapped;
    if (v == "alternate" || v == "AlternateEachIteration") return EquationOrder::AlternateEachIteration;
    throw BadArgument(flag + ": expected as-given, swapped or alternate, got '" + v + "'");
}

struct Resolved {
    SolverConfig cfg;
    KeyValues problem_overrides;
    std::optional<Variant> variant;
};

/// Config file first, then flags on top.
Resolved resolve(const CommonOptions& o) {
    Resolved r;
    KeyValues kv;
    if (!o.config.empty()) kv = parse_key_values(read_file(o.config));
    for (const auto& p : o.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw BadArgument("--param: expected key=value, got '" + p + "'");
        kv[p.substr(0, eq)] = p.substr(eq + 1);
    }
    for (const auto& [key, value] : kv) {
        if (key == "digits") r.cfg.digits = to_int(key, value);
        else if (key == "inner_cap") r.cfg.inner_cap = to_int(key, value);
        else if (key == "outer_cap") r.cfg.outer_cap = to_int(key, value);
        else if (key == "residual_tol") r.cfg.residual_tol = to_real(key, value);
        else if (key == "zero_tol") r.cfg.zero_tol = to_real(key, value);
        else if (key == "variant") r.variant = parse_variant(key, value);
        else if (key == "order") r.cfg.order = parse_order(key, value);
        else if (key == "delta") {
            const auto d = parse_complex(value);
            if (!d) throw BadArgument("invalid complex literal for delta: '" + value + "'");
            r.cfg.seed_delta = *d;
        } else if (key == "recombine") {
            const auto m = parse_recombination(value);
            if (!m) throw BadArgument("invalid recombine: '" + value + "'");
            r.cfg.recombine = *m;
        } else if (key == "s" || key == "a" || key == "m" || key == "n" || key == "angular_n" ||
                   key == "depth" || key == "cf_tol") {
            r.problem_overrides[key] = value;
        } else {
            throw BadArgument("unknown config key '" + key + "'");
        }
    }
    if (o.digits) r.cfg.digits = *o.digits;
    if (o.inner_cap) r.cfg.inner_cap = *o.inner_cap;
    if (o.outer_cap) r.cfg.outer_cap = *o.outer_cap;
    if (o.residual_tol) r.cfg.residual_tol = *o.residual_tol;
    if (o.zero_tol) r.cfg.zero_tol = *o.zero_tol;
    if (!o.variant.empty()) r.variant = parse_variant("--variant", o.variant);
    if (!o.order.empty()) r.cfg.order = parse_order("--order", o.order);
    if (!o.delta.empty()) {
        const auto d = parse_complex(o.delta);
        if (!d) throw BadArgument("--delta: invalid complex literal '" + o.delta + "'");
        r.cfg.seed_delta = *d;
    }
    if (!o.recombine.empty()) {
        const auto m = parse_recombination(o.recombine);
        if (!m) throw BadArgument("--recombine: expected four complex literals, got '" + o.recombine + "'");
        r.cfg.recombine = *m;
    }
    if (o.depth) r.problem_overrides["depth"] = std::to_string(*o.depth);
    try {
        r.cfg.validate();
    } catch (const Error& e) {
        throw BadArgument(e.what());
    }
    return r;
}

Problem load_problem(const std::string& name, const KeyValues& overrides) {
    std::optional<Problem> p;
    try {
        p = make_problem(name, overrides);
    } catch (const Error& e) {
        throw BadArgument(e.what());
    }
    if (!p) throw BadArgument("--problem: unknown problem '" + name + "'");
    return *p;
}

struct OutputOptions {
    std::string trace_path;
    bool print_json = true;
    bool embed_trace = false;
};

int run_single(const CommonOptions& o, const OutputOptions& out_opts) {
    Resolved r = resolve(o);
    const Problem problem = load_problem(o.problem, r.problem_overrides);
    auto kind = parse_solver(o.solver);
    if (!kind) throw BadArgument("--solver: unknown solver '" + o.solver + "'");
    if (r.variant && (*kind == SolverKind::Muller2dM1 || *kind == SolverKind::Muller2dM2)) {
        kind = *r.variant == Variant::M1 ? SolverKind::Muller2dM1 : SolverKind::Muller2dM2;
    }
    PointPair start = problem.start;
    if (!o.start.empty()) {
        const auto s = parse_pair(o.start);
        if (!s) throw BadArgument("--start: expected \"a+bi,c+di\", got '" + o.start + "'");
        start = *s;
    }

    BivariateSystem sys = problem.make();
    const RootResult result = run_solver(*kind, sys, start, r.cfg);

    if (!out_opts.trace_path.empty()) {
        if (out_opts.trace_path == "-") {
            write_trace_csv(std::cout, result);
        } else {
            std::ofstream out(out_opts.trace_path);
            if (out) write_trace_csv(out, result);
            if (!out) {
                std::cerr << "error: cannot write trace to " << out_opts.trace_path << '\n';
                return kExitIo;
            }
        }
    }
    if (out_opts.print_json) {
        std::cout << result_json(problem.name, *kind, result, out_opts.embed_trace) << '\n';
    }
    return exit_code(result.status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-dimensional Muller root finder with Broyden/Newton baselines"};
    app.require_subcommand(1);

    CommonOptions solve_opts;
    bool solve_with_trace_json = false;
    std::string solve_trace;
    auto* solve = app.add_subcommand("solve", "Solve one problem, print a JSON result");
    solve->add_option("--problem", solve_opts.problem, "Corpus or preset name")->required();
    solve->add_option("--solver", solve_opts.solver,
                      "muller2d-m1 | muller2d-m2 | broyden | newton | muller1d");
    solve->add_option("--start", solve_opts.start, "Start pair \"a+bi,c+di\"");
    solve->add_option("--trace", solve_trace, "Also write the iteration trace CSV here ('-' = stdout)");
    solve->add_flag("--json", "JSON on stdout (always on for solve)");
    solve->add_flag("--json-trace", solve_with_trace_json, "Embed the trace in the JSON output");
    add_common(solve, solve_opts);

    CommonOptions trace_opts;
    bool trace_json = false;
    std::string trace_path;
    auto* trace = app.add_subcommand("trace", "Solve one problem, write the iteration trace CSV");
    trace->add_option("--problem", trace_opts.problem, "Corpus or preset name")->required();
    trace->add_option("--solver", trace_opts.solver, "Solver name");
    trace->add_option("--start", trace_opts.start, "Start pair \"a+bi,c+di\"");
    trace->add_option("--trace", trace_path, "Output CSV path ('-' = stdout)")->required();
    trace->add_flag("--json", trace_json, "Also print the JSON result");
    add_common(trace, trace_opts);

    CommonOptions bench_opts;
    std::string bench_set = "corpus";
    std::string bench_solvers = "all";
    std::string bench_csv;
    bool bench_json = false;
    auto* bench = app.add_subcommand("bench", "Run every (problem, solver) pair of a set");
    bench->add_option("--set", bench_set, "corpus | schwarzschild | kerr");
    bench->add_option("--solvers,--solver", bench_solvers, "Comma-separated solver names or 'all'");
    bench->add_option("--csv", bench_csv, "CSV output path");
    bench->add_flag("--json", bench_json, "Print one JSON object per cell instead of the table");
    add_common(bench, bench_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitBadArgs;
    }

    try {
        if (*solve) return run_single(solve_opts, {solve_trace, true, solve_with_trace_json});
        if (*trace) return run_single(trace_opts, {trace_path, trace_json, false});

        Resolved r = resolve(bench_opts);
        const auto problems = bench_problems(bench_set, r.problem_overrides);
        if (!problems) throw BadArgument("--set: unknown set '" + bench_set + "'");
        std::vector<SolverKind> kinds;
        if (bench_solvers == "all") {
            kinds = all_solvers();
        } else {
            std::stringstream ss(bench_solvers);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto k = parse_solver(item);
                if (!k) throw BadArgument("--solvers: unknown solver '" + item + "'");
                kinds.push_back(*k);
            }
        }
        if (kinds.empty()) throw BadArgument("--solvers: empty list");
        const auto cells = run_bench(*problems, kinds, r.cfg);
        int rc = bench_required_cells_converged(cells) ? 0 : 2;
        if (!bench_csv.empty()) {
            std::ofstream out(bench_csv);
            if (out) write_bench_csv(out, cells);
            if (!out) {
                std::cerr << "error: cannot write CSV to " << bench_csv << '\n';
                rc = kExitIo;
            }
        }
        if (bench_json) {
            for (const auto& c : cells) std::cout << result_json(c.problem, c.solver, c.result, false) << '\n';
        } else {
            write_bench_table(std::cout, cells);
        }
        return rc;
    } catch (const BadArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArgs;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadArgs;
    }
}
