#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "maoeda/metrics.hpp"

namespace maoeda {

namespace {

// WFG: slice on the last objective, exclusive volumes via limit sets.

bool weakly_dominates(const Vector& a, const Vector& b, std::size_t dims) {
  for (std::size_t i = 0; i < dims; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

/// Drops points weakly dominated (on the first `dims` objectives) by another.
std::vector<Vector> nondominated_prefix(std::vector<Vector> pts, std::size_t dims) {
  std::vector<double> sums(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) sums[i] = std::accumulate(pts[i].begin(), pts[i].begin() + dims, 0.0);
  std::vector<std::size_t> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sums[a] != sums[b]) return sums[a] < sums[b];
    return std::lexicographical_compare(pts[a].begin(), pts[a].begin() + dims, pts[b].begin(),
                                        pts[b].begin() + dims);
  });
  std::vector<Vector> kept;
  for (std::size_t idx : order) {
    bool dominated = false;
    for (const auto& q : kept) {
      if (weakly_dominates(q, pts[idx], dims)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(std::move(pts[idx]));
  }
  return kept;
}

double box_volume(const Vector& p, std::span<const double> ref, std::size_t dims) {
  double v = 1.0;
  for (std::size_t i = 0; i < dims; ++i) v *= ref[i] - p[i];
  return v;
}

double wfg(std::vector<Vector> pts, std::span<const double> ref, std::size_t dims) {
  if (pts.empty()) return 0.0;
  if (pts.size() == 1) return box_volume(pts.front(), ref, dims);
  if (dims == 1) {
    double best = pts.front()[0];
    for (const auto& p : pts) best = std::min(best, p[0]);
    return ref[0] - best;
  }
  if (dims == 2) {
    std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
      return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
    });
    double volume = 0.0;
    double ceiling = ref[1];
    for (const auto& p : pts) {
      if (p[1] < ceiling) {
        volume += (ref[0] - p[0]) * (ceiling - p[1]);
        ceiling = p[1];
      }
    }
    return volume;
  }

  const std::size_t last = dims - 1;
  std::sort(pts.begin(), pts.end(), [last](const Vector& a, const Vector& b) { return a[last] < b[last]; });
  double volume = 0.0;
  std::vector<Vector> limit;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double depth = ref[last] - pts[i][last];
    double exclusive = box_volume(pts[i], ref, last);
    if (i > 0) {
      limit.clear();
      limit.reserve(i);
      for (std::size_t j = 0; j < i; ++j) {
        Vector q(last);
        for (std::size_t c = 0; c < last; ++c) q[c] = std::max(pts[j][c], pts[i][c]);
        limit.push_back(std::move(q));
      }
      exclusive -= wfg(nondominated_prefix(std::move(limit), last), ref, last);
      limit = {};
    }
    volume += depth * exclusive;
  }
  return volume;
}

bool strictly_inside(std::span<const double> p, std::span<const double> ref) {
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (!(p[i] < ref[i])) return false;
  return true;
}

}  // namespace

std::size_t count_outside_reference(const Matrix& points, std::span<const double> ref) {
  std::size_t outside = 0;
  for (const auto& p : points)
    if (!strictly_inside(p, ref)) ++outside;
  return outside;
}

double hv_exact(const Matrix& points, std::span<const double> ref) {
  const std::size_t dims = ref.size();
  if (dims == 0) throw std::invalid_argument("hv_exact: empty reference point");
  std::vector<Vector> inside;
  for (const auto& p : points) {
    if (p.size() != dims) throw std::invalid_argument("hv_exact: point/reference dimension mismatch");
    if (strictly_inside(p, ref)) inside.push_back(p);
  }
  return wfg(nondominated_prefix(std::move(inside), dims), ref, dims);
}

MonteCarloEstimate hv_monte_carlo(const Matrix& points, std::span<const double> ref, std::size_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("hv_monte_carlo needs at least one sample");
  const std::size_t dims = ref.size();
  MonteCarloEstimate est;
  est.samples = samples;
  std::vector<Vector> inside;
  for (const auto& p : points) {
    if (p.size() != dims) throw std::invalid_argument("hv_monte_carlo: point/reference dimension mismatch");
    if (strictly_inside(p, ref)) inside.push_back(p);
  }
  if (inside.empty()) return est;
  inside = nondominated_prefix(std::move(inside), dims);

  Vector lower(dims, std::numeric_limits<double>::infinity());
  for (const auto& p : inside)
    for (std::size_t i = 0; i < dims; ++i) lower[i] = std::min(lower[i], p[i]);
  double box = 1.0;
  for (std::size_t i = 0; i < dims; ++i) {
    lower[i] = std::max(lower[i], 0.0);
    box *= ref[i] - lower[i];
  }
  if (box <= 0.0) return est;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector s(dims);
  std::size_t hits = 0;
  for (std::size_t draw = 0; draw < samples; ++draw) {
    for (std::size_t i = 0; i < dims; ++i) s[i] = lower[i] + (ref[i] - lower[i]) * unit(rng);
    for (const auto& p : inside) {
      if (weakly_dominates(p, s, dims)) {
        ++hits;
        break;
      }
    }
  }
  const double frac = static_cast<double>(hits) / static_cast<double>(samples);
  est.value = frac * box;
  est.std_error = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(samples));
  return est;
}

IndicatorResult hypervolume(const Matrix& normalized_points, std::span<const double> ref, std::size_t mc_samples,
                            Rng& rng) {
  IndicatorResult r;
  r.normalized = true;
  r.excluded = count_outside_reference(normalized_points, ref);
  if (ref.size() >= kMonteCarloFromObjectives) {
    r.method = IndicatorMethod::HvMonteCarlo;
    r.samples = mc_samples;
    r.value = hv_monte_carlo(normalized_points, ref, mc_samples, rng).value;
  } else {
    r.method = IndicatorMethod::HvExact;
    r.value = hv_exact(normalized_points, ref);
  }
  return r;
}

double hv_ratio(double hv, std::span<const double> ref) {
  double box = 1.0;
  for (double r : ref) box *= r;
  return hv / box;
}

}  // namespace maoeda
