#include <algorithm>
#include <numeric>

#include "maoeda/evolution.hpp"

namespace maoeda {

namespace {

/// Non-dominated subset of `subset`. Candidates are visited in (sum, lexicographic)
/// order, so any dominator of a point is visited before it.
std::vector<std::size_t> first_front(const Matrix& points, std::vector<std::size_t> subset) {
  std::vector<double> sums(points.size(), 0.0);
  for (std::size_t idx : subset) sums[idx] = std::accumulate(points[idx].begin(), points[idx].end(), 0.0);
  std::sort(subset.begin(), subset.end(), [&](std::size_t a, std::size_t b) {
    if (sums[a] != sums[b]) return sums[a] < sums[b];
    if (points[a] != points[b]) return points[a] < points[b];
    return a < b;
  });
  std::vector<std::size_t> front;
  for (std::size_t idx : subset) {
    bool dominated = false;
    for (std::size_t kept : front) {
      if (dominates(points[kept], points[idx])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(idx);
  }
  std::sort(front.begin(), front.end());
  return front;
}

}  // namespace

std::vector<std::size_t> nondominated_indices(const Matrix& points) {
  std::vector<std::size_t> all(points.size());
  std::iota(all.begin(), all.end(), 0);
  return first_front(points, std::move(all));
}

std::vector<std::vector<std::size_t>> nondominated_sort(const Matrix& points) {
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> remaining(points.size());
  std::iota(remaining.begin(), remaining.end(), 0);
  while (!remaining.empty()) {
    auto front = first_front(points, remaining);
    std::vector<std::size_t> rest;
    rest.reserve(remaining.size() - front.size());
    std::set_difference(remaining.begin(), remaining.end(), front.begin(), front.end(), std::back_inserter(rest));
    fronts.push_back(std::move(front));
    remaining = std::move(rest);
  }
  return fronts;
}

}  // namespace maoeda
