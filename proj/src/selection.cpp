#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "maoeda/evolution.hpp"

namespace maoeda {

namespace {

/// `count` entries of `pool` with the smallest distance (ties by position in `pool`).
std::vector<std::size_t> closest(const std::vector<std::size_t>& pool, std::size_t count,
                                 const std::function<double(std::size_t)>& distance) {
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(pool.size());
  for (std::size_t pos = 0; pos < pool.size(); ++pos) ranked.emplace_back(distance(pool[pos]), pos);
  count = std::min(count, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(count), ranked.end());
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[ranked[i].second]);
  return out;
}

}  // namespace

std::vector<std::size_t> environmental_selection(const Matrix& candidates, const Matrix& vectors,
                                                 std::size_t neighbors) {
  const std::size_t n_vec = vectors.size();
  if (n_vec == 0) throw std::invalid_argument("environmental_selection: no reference vectors");
  if (neighbors == 0) throw std::invalid_argument("environmental_selection: T must be positive");
  if (candidates.size() < neighbors * n_vec) {
    throw std::invalid_argument("environmental_selection: " + std::to_string(candidates.size()) +
                                " candidates cannot fill " + std::to_string(neighbors) + " x " +
                                std::to_string(n_vec) + " slots");
  }

  const std::size_t count = candidates.size();
  std::vector<double> dist(count * n_vec);
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < n_vec; ++i) dist[c * n_vec + i] = perpendicular_distance(candidates[c], vectors[i]);
  auto distance_to = [&](std::size_t vec) {
    return [&, vec](std::size_t c) { return dist[c * n_vec + vec]; };
  };

  // Phase 1: non-dominated candidates join the list of their nearest vector.
  std::vector<std::vector<std::size_t>> lists(n_vec);
  for (std::size_t c : nondominated_indices(candidates)) {
    const double* row = &dist[c * n_vec];
    const auto nearest = static_cast<std::size_t>(std::min_element(row, row + n_vec) - row);
    lists[nearest].push_back(c);
  }

  // Phase 2: truncate crowded lists front by front.
  for (std::size_t i = 0; i < n_vec; ++i) {
    auto& list = lists[i];
    if (list.size() <= neighbors) continue;
    Matrix local;
    local.reserve(list.size());
    for (std::size_t c : list) local.push_back(candidates[c]);
    const auto fronts = nondominated_sort(local);
    std::vector<std::size_t> kept;
    std::size_t f = 0;
    while (f < fronts.size() && kept.size() + fronts[f].size() <= neighbors) {
      for (std::size_t li : fronts[f]) kept.push_back(list[li]);
      ++f;
    }
    if (kept.size() < neighbors && f < fronts.size()) {
      std::vector<std::size_t> partial;
      for (std::size_t li : fronts[f]) partial.push_back(list[li]);
      for (std::size_t c : closest(partial, neighbors - kept.size(), distance_to(i))) kept.push_back(c);
    }
    list = std::move(kept);
  }

  // Phase 3: fill deficits from the remaining pool, removing as we go.
  std::vector<bool> taken(count, false);
  for (const auto& list : lists)
    for (std::size_t c : list) taken[c] = true;
  std::vector<std::size_t> pool;
  pool.reserve(count);
  for (std::size_t c = 0; c < count; ++c)
    if (!taken[c]) pool.push_back(c);

  for (std::size_t i = 0; i < n_vec; ++i) {
    auto& list = lists[i];
    if (list.size() >= neighbors) continue;
    const auto fill = closest(pool, neighbors - list.size(), distance_to(i));
    for (std::size_t c : fill) {
      list.push_back(c);
      taken[c] = true;
    }
    std::erase_if(pool, [&](std::size_t c) { return taken[c]; });
  }

  std::vector<std::size_t> selected;
  selected.reserve(neighbors * n_vec);
  for (const auto& list : lists) selected.insert(selected.end(), list.begin(), list.end());
  return selected;
}

std::vector<std::size_t> final_selection(const Matrix& candidates, const Matrix& vectors) {
  return environmental_selection(candidates, vectors, 1);
}

}  // namespace maoeda
