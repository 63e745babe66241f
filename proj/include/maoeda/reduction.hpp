#ifndef MAOEDA_REDUCTION_HPP
#define MAOEDA_REDUCTION_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "maoeda/common.hpp"
#include "maoeda/problems.hpp"
#include "maoeda/rng.hpp"

namespace maoeda {

/// Sum of squared objectives excluding objective `i` (0-based).
double exclusive_l2(std::span<const double> f, std::size_t i);

struct PcseaSettings {
  std::size_t population = 100;
  std::size_t generations = 50;
  double crossover_probability = 1.0;
  double crossover_eta = 20.0;
  double mutation_eta = 20.0;
  /// Per-variable mutation probability; <= 0 means 1/n.
  double mutation_probability = 0.0;
};

/// Non-dominated corner solutions found by PCSEA. Decision vectors are in
/// the full [0,1]^n box.
struct CornerArchive {
  std::vector<Solution> solutions;
  std::size_t generations_used = 0;
  std::size_t evaluations_used = 0;

  [[nodiscard]] Matrix decisions() const;
  [[nodiscard]] Matrix objectives() const;
};

/// Pareto corner search: each generation ranks the merged parent/offspring
/// pool in 2M ascending lists (each objective, each exclusive L2 norm) and
/// keeps the solutions with the best rank in any list.
CornerArchive pcsea_search(const ProblemSpec& spec, const PcseaSettings& settings, Rng& rng);

/// Best (smallest) 0-based position of each point across the 2M corner lists.
std::vector<std::size_t> corner_ranks(const Matrix& objectives);

void write_archive_csv(const std::filesystem::path& path, const CornerArchive& archive);

/// Removed decision dimensions plus the column mean used to restore them.
struct ReductionMap {
  std::vector<std::size_t> removed;   // I, sorted, 0-based
  std::vector<std::size_t> retained;  // complement of I, sorted
  Vector mean;                        // mu, length n
  std::size_t components = 0;         // principal components kept
  bool degenerate = false;            // training data collapsed to a single point

  [[nodiscard]] std::size_t full_dimension() const { return mean.size(); }
  [[nodiscard]] std::size_t reduced_dimension() const { return retained.size(); }

  /// The no-op map for `n` variables: nothing removed, zero mean.
  static ReductionMap identity(std::size_t n);
};

/// Zero-column test on the back-projected data: column j is removed when its
/// mean absolute value is below zero_tolerance * (1 + |mu_j|) or below
/// relative_tolerance times the largest column's mean absolute value.
inline constexpr double kZeroColumnTolerance = 1e-8;
inline constexpr double kRelativeColumnTolerance = 0.05;

/// PCA on the rows of `x`; keeps components up to a cumulative explained
/// variance ratio of `alpha`, back-projects, and removes the columns that
/// come back as (numerically) zero. Pass relative_tolerance = 0 for the
/// purely absolute test.
ReductionMap reduce_dimensions(const Matrix& x, double alpha, double zero_tolerance = kZeroColumnTolerance,
                               double relative_tolerance = kRelativeColumnTolerance);

/// Restores full-space rows: removed columns take mu, retained columns take
/// mu plus the reduced coordinate. No clamping.
Matrix translate_population(const Matrix& reduced, const ReductionMap& map);

/// Single-row translation followed by clamping to [0,1].
Vector to_full_space(std::span<const double> reduced, const ReductionMap& map);

/// Inverse of to_full_space on the retained columns.
Vector to_reduced_space(std::span<const double> full, const ReductionMap& map);

}  // namespace maoeda

#endif
