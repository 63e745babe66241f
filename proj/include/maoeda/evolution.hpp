#ifndef MAOEDA_EVOLUTION_HPP
#define MAOEDA_EVOLUTION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "maoeda/common.hpp"
#include "maoeda/problems.hpp"
#include "maoeda/reduction.hpp"
#include "maoeda/refvecs.hpp"
#include "maoeda/regmodel.hpp"
#include "maoeda/rng.hpp"

namespace maoeda {

// ---------------------------------------------------------------------------
// Non-dominated sorting

/// Indices of the non-dominated rows of `points`, in ascending index order.
std::vector<std::size_t> nondominated_indices(const Matrix& points);

/// Pareto fronts F1, F2, ... as index lists (ascending within each front).
std::vector<std::vector<std::size_t>> nondominated_sort(const Matrix& points);

// ---------------------------------------------------------------------------
// Selection

/// Picks exactly T solutions per reference vector from `candidates`
/// (objective vectors). Returns candidate indices grouped by vector, vector 0
/// first. No index appears twice. Throws if |candidates| < T * N.
std::vector<std::size_t> environmental_selection(const Matrix& candidates, const Matrix& vectors,
                                                 std::size_t neighbors);

/// Environmental selection with T = 1: one solution per reference vector.
std::vector<std::size_t> final_selection(const Matrix& candidates, const Matrix& vectors);

// ---------------------------------------------------------------------------
// Model-based variation

struct ModelSettings {
  std::size_t neighbors = 25;  // T
  double beta = 0.96;
  double gamma = 0.5;
  NoiseConvention noise = NoiseConvention::ExcludePrincipal;
  /// Feasible box in the coordinates the samples live in.
  std::optional<SampleBox> box;
};

struct RepairOutcome {
  Matrix samples;           // R_t decision vectors, not yet evaluated
  std::size_t unassigned = 0;  // vectors without an associated non-dominated member
  std::size_t skipped = 0;     // unassigned vectors with too few neighbours for a model
};

/// Samples T new points for every reference vector that no non-dominated
/// member of `population` is associated with. Models are built from the T
/// population members nearest to the vector plus the nearest non-dominated one.
RepairOutcome repair_diversity(const std::vector<Solution>& population, const Matrix& vectors,
                               const ModelSettings& settings, Rng& rng);

/// Samples T points per reference vector from models built on the T nearest
/// members of `nondominated` plus the single nearest one.
Matrix generate_offspring(const std::vector<Solution>& nondominated, const Matrix& vectors,
                          const ModelSettings& settings, Rng& rng);

// ---------------------------------------------------------------------------
// Main loop

struct Ablations {
  bool no_diversity_repair = false;
  bool no_dimension_reduction = false;
};

/// Division counts (H1, H2) used for M objectives; H2 == 0 means one layer.
std::pair<std::size_t, std::size_t> default_divisions(std::size_t objectives);

struct RunConfig {
  ProblemSpec spec;
  /// Unit simplex reference vectors; empty selects default_divisions(M).
  Matrix reference_vectors;
  std::size_t neighbors = 25;  // T
  double alpha = 0.96;
  /// Relative floor of the zero-column test (see reduce_dimensions).
  double column_tolerance = kRelativeColumnTolerance;
  double beta = 0.96;
  double gamma = 0.5;
  std::size_t max_generations = std::numeric_limits<std::size_t>::max();
  /// Evaluations available to the main loop (corner search excluded).
  std::size_t eval_budget = std::numeric_limits<std::size_t>::max();
  std::uint64_t seed = 1;
  Ablations ablations;
  PcseaSettings pcsea;
  NoiseConvention noise = NoiseConvention::ExcludePrincipal;
};

struct GenerationTrace {
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  std::size_t repaired = 0;    // |R_t|
  std::size_t offspring = 0;   // |Q_t|
  std::size_t unassigned = 0;
  std::size_t front_size = 0;  // non-dominated members of P_t u R_t u Q_t
};

/// Population handed to observers after initialization (generation 0) and
/// after every environmental selection. Returning false ends the run after
/// the current generation (final selection still happens).
struct GenerationView {
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  const std::vector<Solution>& population;
  const ReferenceVectorSet& vectors;
};

using GenerationObserver = std::function<bool(const GenerationView&)>;

struct RunResult {
  /// N solutions with full-space decision vectors.
  std::vector<Solution> final_solutions;
  /// Last T*N population in reduced coordinates.
  std::vector<Solution> population;
  ReferenceVectorSet vectors;
  ReductionMap reduction;
  std::optional<CornerArchive> archive;
  std::vector<GenerationTrace> trace;
  std::size_t generations = 0;
  bool stopped_by_observer = false;
  std::size_t pcsea_evaluations = 0;
  std::size_t main_evaluations = 0;
  std::vector<std::string> diagnostics;
};

/// Runs the complete algorithm: corner search and decision-space reduction,
/// then repair / offspring / selection generations until the generation cap
/// or the evaluation budget is reached, then final selection.
RunResult run(const RunConfig& config, const GenerationObserver& observer = {});

}  // namespace maoeda

#endif
