#ifndef MAOEDA_HARNESS_HPP
#define MAOEDA_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "maoeda/evolution.hpp"
#include "maoeda/metrics.hpp"
#include "maoeda/problems.hpp"

namespace maoeda {

enum class Mode { Standard, AblateRepair, AblateReduction, NeighborSweep, GenerationsToBaseline };

std::string mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

/// Evaluation split of one run: total = corner search share + main loop.
struct Budget {
  std::size_t total = 0;
  std::size_t pcsea = 0;
  std::size_t main = 0;
};

/// Default per-M budgets (M in {3, 5, 8, 10, 15}); nullopt otherwise.
std::optional<Budget> table_budget(std::size_t objectives);

/// Budget for M objectives. An explicit total keeps the default corner
/// search share (or 51 corner search generations of the default population
/// when M has no default row) and gives the rest to the main loop. Throws
/// std::invalid_argument when neither a default row nor a total is
/// available, or the total cannot cover the corner search share.
Budget resolve_budget(std::size_t objectives, std::optional<std::size_t> total);

/// Corner search population for M objectives: 100, or 200 above 10 objectives.
std::size_t default_pcsea_population(std::size_t objectives);

/// Corner search settings that spend `pcsea_share` evaluations
/// (population * (generations + 1) <= share). Explicit values win; a zero
/// share falls back to 50 generations.
PcseaSettings pcsea_settings(std::size_t objectives, std::size_t pcsea_share,
                             std::optional<std::size_t> population = std::nullopt,
                             std::optional<std::size_t> generations = std::nullopt);

/// One algorithm configuration inside an experiment.
struct Variant {
  std::string label;
  Ablations ablations;
  std::size_t neighbors = 25;
};

struct ExperimentPlan {
  std::vector<ProblemId> problems{ProblemId::DTLZ2};
  std::vector<std::size_t> objectives{3};
  std::size_t runs = 30;
  std::uint64_t base_seed = 42;
  Mode mode = Mode::Standard;

  std::size_t neighbors = 25;
  double alpha = 0.96;
  double column_tolerance = kRelativeColumnTolerance;
  double beta = 0.96;
  double gamma = 0.5;
  NoiseConvention noise = NoiseConvention::ExcludePrincipal;
  /// Corner search overrides; by default it is sized to the budget share.
  std::optional<std::size_t> pcsea_population;
  std::optional<std::size_t> pcsea_generations;
  /// Ablations applied to the primary variant.
  Ablations ablations;

  std::optional<std::size_t> budget_total;
  std::optional<std::size_t> max_generations;

  /// Values of T for Mode::NeighborSweep.
  std::vector<std::size_t> t_values;
  /// Target HV ratio for Mode::GenerationsToBaseline.
  double baseline = 0.0;
  std::size_t generation_cap = 500;
  double baseline_tolerance = 1e-4;

  std::size_t igd_points = 100000;
  std::size_t mc_samples = 100000;
  double hv_reference = 1.1;
  /// Front fixtures for IGD, matched by problem name and M.
  std::vector<std::filesystem::path> front_files;

  std::size_t jobs = 1;
  bool keep_traces = false;

  /// Variants implied by the mode; the first one is the primary variant.
  [[nodiscard]] std::vector<Variant> variants() const;
  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

struct RunRecord {
  std::string problem;
  std::size_t objectives = 0;
  std::string variant;
  std::size_t neighbors = 0;
  std::size_t run_index = 0;
  std::uint64_t seed = 0;

  bool ok = false;
  std::string error;

  double hv = 0.0;        // normalized objectives, reference point hv_reference
  double hv_ratio = 0.0;  // hv / hv_reference^M
  IndicatorMethod hv_method = IndicatorMethod::HvExact;
  std::size_t hv_excluded = 0;
  std::optional<double> igd;

  std::size_t generations = 0;
  Budget budget;
  std::size_t pcsea_evaluations = 0;
  std::size_t main_evaluations = 0;
  std::size_t reduced_dimension = 0;
  double wall_seconds = 0.0;

  /// Generations-to-baseline protocol.
  std::optional<std::size_t> generations_to_baseline;
  bool baseline_reached = false;
  /// HV ratio after initialization and after every generation (only kept
  /// for the baseline protocol).
  std::vector<double> hv_history;

  std::vector<GenerationTrace> trace;
  Matrix final_objectives;
  std::vector<std::string> diagnostics;

  [[nodiscard]] std::size_t evaluations() const { return pcsea_evaluations + main_evaluations; }
};

/// Median and half the interquartile range (linear-interpolated quartiles).
struct Spread {
  double median = 0.0;
  double iqr_half = 0.0;
};
Spread spread(std::vector<double> values);

/// "0.533(1.2E-3)".
std::string format_cell(const Spread& s);

struct SummaryRow {
  std::string problem;
  std::size_t objectives = 0;
  std::string variant;
  std::size_t neighbors = 0;
  std::size_t runs_ok = 0;
  std::size_t runs_failed = 0;
  std::optional<Spread> hv;
  std::optional<Spread> igd;
  std::optional<Spread> generations_to_baseline;
  /// Rank-sum outcome of the primary variant against this row's variant
  /// (absent on the primary row and when either side has fewer than 3 runs).
  std::optional<Comparison> hv_vs_primary;
  std::optional<Comparison> igd_vs_primary;
};

struct ExperimentResult {
  ExperimentPlan plan;
  std::vector<RunRecord> records;  // sorted by problem, M, variant order, seed
  std::vector<SummaryRow> summary;

  [[nodiscard]] std::size_t failures() const;
};

/// Runs every (problem, M, variant, run) cell. Failures are recorded in the
/// record and do not stop the grid.
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// Single run of one variant; used by run_experiment.
RunRecord run_single(const ExperimentPlan& plan, ProblemId problem, std::size_t objectives, const Variant& variant,
                     std::size_t run_index, const Matrix* igd_front);

struct SweepRow {
  std::string problem;
  std::size_t objectives = 0;
  std::size_t neighbors = 0;
  std::optional<Spread> igd;
  std::optional<Spread> hv;
};

/// One standard run set per T value; IGD medians per T.
std::vector<SweepRow> neighbor_sweep(const ExperimentPlan& plan, const std::vector<std::size_t>& t_values,
                                     ExperimentResult* detail = nullptr);

/// Runs the plan under the baseline protocol. Throws std::invalid_argument
/// when baseline <= 0.
ExperimentResult generations_to_baseline(const ExperimentPlan& plan, double baseline);

// ---------------------------------------------------------------------------
// Reporting

std::string results_csv(const ExperimentResult& result);
std::string summary_csv(const ExperimentResult& result);
std::string traces_csv(const ExperimentResult& result);
std::string results_json(const ExperimentResult& result);

/// Writes results.csv, summary.csv, results.json (and traces.csv when traces
/// were kept) into `dir`, creating it if needed.
void write_reports(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace maoeda

#endif
