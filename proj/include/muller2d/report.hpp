#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "muller2d/problems.hpp"
#include "muller2d/system.hpp"
#include "muller2d/types.hpp"

namespace muller2d {

/// "a+bi", "a-bi", "a", "bi", "i", "-i"; no spaces. nullopt on malformed input.
std::optional<Complex> parse_complex(std::string_view text);
/// Two complex literals separated by a comma.
std::optional<PointPair> parse_pair(std::string_view text);
/// Four comma-separated literals alpha1,beta1,alpha2,beta2.
std::optional<Recombination> parse_recombination(std::string_view text);
std::string format_complex(Complex z);

enum class SolverKind { Muller2dM1, Muller2dM2, Broyden, Newton, Muller1d };

std::string_view to_string(SolverKind kind);
std::optional<SolverKind> parse_solver(std::string_view text);
/// The four bivariate solvers.
std::vector<SolverKind> all_solvers();

/// Runs one solve. Muller1d probes x -> F2(x, start.y) with cap cfg.outer_cap;
/// y is held at start.y and only F2 is evaluated.
RootResult run_solver(SolverKind kind, BivariateSystem& sys, PointPair start,
                      const SolverConfig& cfg);

/// 0 converged, 2 not converged, 3 evaluation failure.
int exit_code(Status status);

std::string result_json(const std::string& problem, SolverKind solver, const RootResult& r,
                        bool include_trace);

inline constexpr std::string_view kTraceHeader =
    "n,re_x,im_x,re_y,im_y,f1_abs,f2_abs,step_x,step_y,inner_iters";
void write_trace_csv(std::ostream& out, const RootResult& r);

struct BenchCell {
    std::string problem;
    SolverKind solver = SolverKind::Muller2dM1;
    RootResult result;
    /// Informative only.
    double ms = 0.0;
};

/// Problems of a named set: "corpus", "schwarzschild" (n = 0..7, 9, 10) or "kerr".
std::optional<std::vector<Problem>> bench_problems(const std::string& set, const KeyValues& overrides);

/// Every (problem, solver) pair from the problem's recommended start, run in
/// order; cells come back sorted by problem (set order) then solver.
std::vector<BenchCell> run_bench(const std::vector<Problem>& problems,
                                 const std::vector<SolverKind>& solvers, const SolverConfig& cfg);

inline constexpr std::string_view kBenchHeader =
    "problem,solver,status,re_x,im_x,re_y,im_y,res1,res2,outer_iters,inner_iters,evals_f1,"
    "evals_f2,ms";
void write_bench_csv(std::ostream& out, const std::vector<BenchCell>& cells);
void write_bench_table(std::ostream& out, const std::vector<BenchCell>& cells);

/// True when every Muller2d cell converged.
bool bench_required_cells_converged(const std::vector<BenchCell>& cells);

}  // namespace muller2d
