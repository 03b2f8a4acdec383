#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "optex/problems.hpp"
#include "optex/strategies.hpp"

namespace optex {

enum class ProblemKind { Strakos, InverseDiag, ConvDiff, MatrixMarket };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Strakos;
  Index n = 2000;
  double lam1 = 8.0;
  double lamn = -2.0;
  double rho = 0.99;
  Index nx = 20;  ///< convection-diffusion grid
  Index ny = 25;
  double cx = 0.4;
  double cy = 0.2;
  std::string path;  ///< Matrix Market file
  Index leading = 0;  ///< leading principal submatrix order, 0 = whole file
};

/// "strakos", "invdiag", "convdiff" or "mm:<path>".
ProblemSpec parse_matrix_spec(const std::string& text);

/// Builds the matrix and resolves the reference eigenpair for `target`.
/// Generated diagonal problems keep their closed-form reference when the
/// target selects it; everything else goes through eig_dense.
Problem build_problem(const ProblemSpec& spec, const TargetSpec& target, Index cap = kDefaultDenseCap);

struct ExperimentConfig {
  ProblemSpec problem;
  Index d = 20;
  Index m = 120;
  std::uint64_t seed = 0;
  std::vector<Strategy> strategies;
  TargetSpec target;
  std::string output;
  Index cap = kDefaultDenseCap;
  unsigned workers = 1;

  /// Checks 1 <= d <= m <= n and a nonempty strategy list.
  void validate(Index n) const;
};

struct TraceRow {
  Index k = 0;
  StrategyTag strategy = StrategyTag::Stand;
  Index dim = 0;
  double sin_angle = 0.0;
  double cos_angle = 0.0;
  double rel_res_standard = 0.0;
  double rel_res_refined = 0.0;
  Index rank_r = 0;
  // Not persisted.
  bool halted = false;
  std::string note;
};

/// Runs every strategy from the same seeded start basis. Rows come out in
/// (strategy order of the config, k) order.
std::vector<TraceRow> run_experiment(const Problem& problem, const ExperimentConfig& cfg);
std::vector<TraceRow> run_experiment(const ExperimentConfig& cfg);

/// Last row of each strategy, in config order.
std::vector<TraceRow> final_rows(const std::vector<TraceRow>& rows);

inline constexpr const char* kTraceHeader =
    "k,strategy,dim,sin_angle,cos_angle,rel_res_standard,rel_res_refined,rank_R";

void write_trace_csv(const std::vector<TraceRow>& rows, const std::string& path);
std::string format_trace_csv(const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(const std::string& path);

enum class PlotQuantity { SinAngle, RelResStandard, RelResRefined };

PlotQuantity parse_plot_quantity(const std::string& text);
const char* to_string(PlotQuantity q) noexcept;

/// SVG with a log-scale y axis, one polyline per strategy. Nonpositive or
/// non-finite values are skipped.
void emit_plot(const std::vector<TraceRow>& rows, const std::string& path, PlotQuantity quantity);
std::string render_plot_svg(const std::vector<TraceRow>& rows, PlotQuantity quantity);

}  // namespace optex
