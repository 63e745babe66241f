#ifndef MAOEDA_REFVECS_HPP
#define MAOEDA_REFVECS_HPP

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "maoeda/common.hpp"

namespace maoeda {

/// Upper limit on lattice size accepted by das_dennis / two_layer.
inline constexpr std::size_t kMaxReferenceVectors = 1'000'000;

/// C(h + m - 1, m - 1), saturating at SIZE_MAX on overflow.
std::size_t simplex_lattice_size(std::size_t m, std::size_t h);

/// All points of the simplex lattice with `h` divisions in `m` dimensions.
Matrix das_dennis(std::size_t m, std::size_t h, std::size_t max_count = kMaxReferenceVectors);

enum class Layer { Boundary, Inside };

struct LayeredVectors {
  Matrix vectors;
  std::vector<Layer> layers;
};

/// Boundary lattice (h1) followed by an inside lattice (h2) pulled halfway to
/// the simplex centroid. h2 == 0 yields the boundary layer only.
LayeredVectors two_layer(std::size_t m, std::size_t h1, std::size_t h2,
                         std::size_t max_count = kMaxReferenceVectors);

/// Writes `layer,r1,...,rM` rows.
void write_vectors_csv(const std::filesystem::path& path, const LayeredVectors& vectors);

/// Distance from `s` to the line through the origin spanned by `v`.
double perpendicular_distance(std::span<const double> s, std::span<const double> v);

/// Unit reference vectors mapped onto the hyperplane spanned by the current
/// extreme points.
struct ReferenceVectorSet {
  Matrix simplex;   // r0
  Matrix mapped;    // v = r0 (.) a + z*
  Vector ideal;     // z*
  Matrix extremes;  // z^u, before the z* shift
  Vector intercepts;
  bool fallback = false;  // intercepts came from the nadir span, not the hyperplane

  [[nodiscard]] std::size_t size() const { return mapped.size(); }
};

/// Index of the nearest (perpendicular distance) vector for each point;
/// ties resolve to the lowest vector index.
std::vector<std::size_t> associate(const Matrix& points, const Matrix& vectors);

/// Maps simplex vectors onto the hyperplane through the extreme points of `front`.
ReferenceVectorSet map_vectors(const Matrix& simplex, const Matrix& front);

}  // namespace maoeda

#endif
