#ifndef MAOEDA_METRICS_HPP
#define MAOEDA_METRICS_HPP

#include <cstddef>
#include <span>
#include <string>

#include "maoeda/common.hpp"
#include "maoeda/rng.hpp"

namespace maoeda {

enum class IndicatorMethod { Igd, HvExact, HvMonteCarlo };

struct IndicatorResult {
  double value = 0.0;
  IndicatorMethod method = IndicatorMethod::Igd;
  std::size_t samples = 0;   // Monte Carlo draws; 0 otherwise
  bool normalized = true;
  std::size_t excluded = 0;  // points that do not dominate the HV reference point
};

/// (f - ideal) / (nadir - ideal) per component. Not clipped.
Matrix normalize(const Matrix& points, std::span<const double> ideal, std::span<const double> nadir);

/// Mean distance from each reference point to its nearest solution.
double igd(const Matrix& solutions, const Matrix& reference);

/// Exact hypervolume (minimization) of the region dominated by `points` and
/// bounded by `ref`. Points not strictly better than `ref` in every
/// objective contribute nothing.
double hv_exact(const Matrix& points, std::span<const double> ref);

/// Number of points that are not strictly better than `ref` in every objective.
std::size_t count_outside_reference(const Matrix& points, std::span<const double> ref);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;  // binomial standard deviation of the estimate
  std::size_t samples = 0;
};

/// Uniform sampling in [max(0, min corner), ref]; the dominated fraction times
/// the box volume.
MonteCarloEstimate hv_monte_carlo(const Matrix& points, std::span<const double> ref, std::size_t samples, Rng& rng);

/// Objective count from which the Monte Carlo estimate replaces the exact one.
inline constexpr std::size_t kMonteCarloFromObjectives = 10;

/// Hypervolume of normalized points with the exact/Monte Carlo regime split.
IndicatorResult hypervolume(const Matrix& normalized_points, std::span<const double> ref,
                            std::size_t mc_samples, Rng& rng);

/// Hypervolume divided by the volume of the [0, ref] box.
double hv_ratio(double hv, std::span<const double> ref);

enum class Comparison { Better, Equal, Worse };

std::string comparison_symbol(Comparison c);

struct RankSumResult {
  Comparison outcome = Comparison::Equal;
  double p_value = 1.0;
  double rank_sum = 0.0;  // W, sum of the midranks of `a`
  bool exact = false;
};

/// Largest combined sample size that uses the exact permutation distribution.
inline constexpr std::size_t kExactRankSumLimit = 20;

/// Two-sided Mann-Whitney-Wilcoxon rank-sum test of `a` against `b`.
/// `Better` means `a` is significantly larger (or smaller, when
/// `higher_is_better` is false).
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b, double level = 0.05,
                            bool higher_is_better = true);

}  // namespace maoeda

#endif
