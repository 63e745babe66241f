#ifndef MAOEDA_PROBLEMS_HPP
#define MAOEDA_PROBLEMS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "maoeda/common.hpp"
#include "maoeda/rng.hpp"

namespace maoeda {

/// DTLZ1-DTLZ4 and their sign-flipped counterparts.
enum class ProblemId { DTLZ1, DTLZ2, DTLZ3, DTLZ4, DTLZ1m, DTLZ2m, DTLZ3m, DTLZ4m };

/// Bias exponent applied to DTLZ4 position variables.
inline constexpr double kDtlz4Alpha = 100.0;

struct ProblemSpec {
  ProblemId id = ProblemId::DTLZ2;
  std::size_t objectives = 3;  // M
  std::size_t distance = 10;   // k
  std::size_t variables = 12;  // n = M + k - 1

  [[nodiscard]] bool is_minus() const;
  /// The un-negated problem (identity for DTLZ1..DTLZ4).
  [[nodiscard]] ProblemId base() const;
  [[nodiscard]] std::string name() const;
};

/// Builds a spec with the standard distance-variable count (5 for DTLZ1,
/// 10 otherwise). Throws std::invalid_argument for M < 2.
ProblemSpec make_problem(ProblemId id, std::size_t objectives);

/// Parses "dtlz1".."dtlz4" and "dtlz1m".."dtlz4m" (also "dtlz1-", "dtlz1_minus").
std::optional<ProblemId> parse_problem_id(std::string_view text);
std::string problem_name(ProblemId id);

/// Evaluates the objectives of a full-space decision vector.
/// Throws std::invalid_argument on length mismatch, NaN, or out-of-box input.
Vector evaluate(const ProblemSpec& spec, std::span<const double> x);

/// True ideal and nadir of the Pareto front.
struct Bounds {
  Vector ideal;
  Vector nadir;
};
Bounds true_bounds(const ProblemSpec& spec);

/// Samples `count` points uniformly on the true Pareto front (objective units).
/// Minus variants have no analytic recipe and are rejected; use read_front_file.
Matrix sample_front(const ProblemSpec& spec, std::size_t count, Rng& rng);

/// Front fixture file: header `# problem M count seed`, then one
/// space-separated objective vector per line.
struct FrontFile {
  std::string problem;
  std::size_t objectives = 0;
  std::uint64_t seed = 0;
  Matrix points;
};
void write_front_file(const std::filesystem::path& path, const FrontFile& front);
FrontFile read_front_file(const std::filesystem::path& path);

}  // namespace maoeda

#endif
