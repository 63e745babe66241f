#ifndef MAOEDA_COMMON_HPP
#define MAOEDA_COMMON_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace maoeda {

using Vector = std::vector<double>;

/// Row-major point set: one decision or objective vector per row.
using Matrix = std::vector<Vector>;

/// Pareto dominance for minimization. Equal vectors do not dominate each other.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly = true;
  }
  return strictly;
}

/// A decision vector paired with its objective vector.
///
/// `x` lives in whatever space the owner works in: the full [0,1]^n box for
/// problem-level code, or the reduced coordinates (offsets from the
/// reduction mean) inside the evolutionary loop.
struct Solution {
  Vector x;
  Vector f;
  bool evaluated = false;
};

}  // namespace maoeda

#endif
