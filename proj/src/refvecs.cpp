#include "maoeda/refvecs.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace maoeda {

std::size_t simplex_lattice_size(std::size_t m, std::size_t h) {
  if (m == 0) return 0;
  // C(h + m - 1, k) with k = min(h, m - 1), multiplicative form.
  const std::size_t k = std::min(h, m - 1);
  const std::size_t n = h + m - 1;
  unsigned __int128 result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > std::numeric_limits<std::size_t>::max()) {
      return std::numeric_limits<std::size_t>::max();
    }
  }
  return static_cast<std::size_t>(result);
}

namespace {

void enumerate(std::size_t m, std::size_t h, std::size_t remaining, std::vector<std::size_t>& parts,
               Matrix& out) {
  const std::size_t depth = parts.size();
  if (depth + 1 == m) {
    parts.push_back(remaining);
    Vector w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / static_cast<double>(h);
    out.push_back(std::move(w));
    parts.pop_back();
    return;
  }
  for (std::size_t take = remaining + 1; take-- > 0;) {
    parts.push_back(take);
    enumerate(m, h, remaining - take, parts, out);
    parts.pop_back();
  }
}

}  // namespace

Matrix das_dennis(std::size_t m, std::size_t h, std::size_t max_count) {
  if (m < 2) throw std::invalid_argument("das_dennis needs M >= 2");
  if (h < 1) throw std::invalid_argument("das_dennis needs H >= 1");
  const std::size_t count = simplex_lattice_size(m, h);
  if (count > max_count) {
    throw std::invalid_argument("lattice with M=" + std::to_string(m) + ", H=" + std::to_string(h) +
                                " exceeds the maximum of " + std::to_string(max_count) + " vectors");
  }
  Matrix out;
  out.reserve(count);
  std::vector<std::size_t> parts;
  parts.reserve(m);
  enumerate(m, h, h, parts, out);
  return out;
}

LayeredVectors two_layer(std::size_t m, std::size_t h1, std::size_t h2, std::size_t max_count) {
  LayeredVectors result;
  result.vectors = das_dennis(m, h1, max_count);
  result.layers.assign(result.vectors.size(), Layer::Boundary);
  if (h2 == 0) return result;
  const std::size_t remaining = max_count - std::min(max_count, result.vectors.size());
  auto inside = das_dennis(m, h2, remaining);
  const double centroid = 1.0 / static_cast<double>(m);
  for (auto& w : inside) {
    for (double& v : w) v = 0.5 * v + 0.5 * centroid;
    result.vectors.push_back(std::move(w));
    result.layers.push_back(Layer::Inside);
  }
  return result;
}

void write_vectors_csv(const std::filesystem::path& path, const LayeredVectors& vectors) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const std::size_t m = vectors.vectors.empty() ? 0 : vectors.vectors.front().size();
  os << "layer";
  for (std::size_t j = 0; j < m; ++j) os << ",r" << (j + 1);
  os << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < vectors.vectors.size(); ++i) {
    os << (vectors.layers[i] == Layer::Boundary ? "boundary" : "inside");
    for (double v : vectors.vectors[i]) os << ',' << v;
    os << '\n';
  }
}

double perpendicular_distance(std::span<const double> s, std::span<const double> v) {
  if (s.size() != v.size()) throw std::invalid_argument("perpendicular_distance: length mismatch");
  double vv = 0.0;
  double sv = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    vv += v[i] * v[i];
    sv += s[i] * v[i];
  }
  if (vv == 0.0) throw std::invalid_argument("perpendicular_distance: zero reference vector");
  const double scale = sv / vv;
  double d2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = s[i] - scale * v[i];
    d2 += r * r;
  }
  return std::sqrt(d2);
}

std::vector<std::size_t> associate(const Matrix& points, const Matrix& vectors) {
  if (vectors.empty()) throw std::invalid_argument("associate: no reference vectors");
  std::vector<std::size_t> out(points.size(), 0);
  for (std::size_t p = 0; p < points.size(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const double d = perpendicular_distance(points[p], vectors[i]);
      if (d < best) {
        best = d;
        out[p] = i;
      }
    }
  }
  return out;
}

namespace {

/// Solves E w = 1 by Gaussian elimination with partial pivoting.
std::optional<Vector> solve_hyperplane(Matrix e) {
  const std::size_t m = e.size();
  Vector rhs(m, 1.0);
  double scale = 0.0;
  for (const auto& row : e)
    for (double v : row) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return std::nullopt;
  const double tiny = 1e-14 * scale;
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < m; ++r)
      if (std::abs(e[r][col]) > std::abs(e[pivot][col])) pivot = r;
    if (std::abs(e[pivot][col]) <= tiny) return std::nullopt;
    std::swap(e[pivot], e[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = col + 1; r < m; ++r) {
      const double factor = e[r][col] / e[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < m; ++c) e[r][c] -= factor * e[col][c];
      rhs[r] -= factor * rhs[col];
    }
  }
  Vector w(m);
  for (std::size_t r = m; r-- > 0;) {
    double acc = rhs[r];
    for (std::size_t c = r + 1; c < m; ++c) acc -= e[r][c] * w[c];
    w[r] = acc / e[r][r];
  }
  return w;
}

}  // namespace

ReferenceVectorSet map_vectors(const Matrix& simplex, const Matrix& front) {
  if (front.empty()) throw std::invalid_argument("map_vectors: empty evidence set");
  const std::size_t m = front.front().size();
  for (const auto& r : simplex) {
    if (r.size() != m) throw std::invalid_argument("map_vectors: simplex/objective size mismatch");
  }

  ReferenceVectorSet set;
  set.simplex = simplex;

  // Extreme point per objective: the member maximizing that objective.
  set.extremes.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t best = 0;
    for (std::size_t p = 1; p < front.size(); ++p)
      if (front[p][i] > front[best][i]) best = p;
    set.extremes.push_back(front[best]);
  }

  set.ideal.assign(m, std::numeric_limits<double>::infinity());
  for (const auto& f : front)
    for (std::size_t i = 0; i < m; ++i) set.ideal[i] = std::min(set.ideal[i], f[i]);

  Matrix shifted = set.extremes;
  for (auto& z : shifted)
    for (std::size_t i = 0; i < m; ++i) z[i] -= set.ideal[i];

  // Repeated extremes make the system singular; nudge the later copies.
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (shifted[i] == shifted[j]) {
        shifted[i][i] += 1e-6 * static_cast<double>(i + 1);
        break;
      }
    }
  }

  set.intercepts.assign(m, 0.0);
  bool ok = false;
  if (auto w = solve_hyperplane(shifted)) {
    ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      const double a = 1.0 / (*w)[i];
      if (!std::isfinite(a) || a <= 1e-12) {
        ok = false;
        break;
      }
      set.intercepts[i] = a;
    }
  }
  if (!ok) {
    set.fallback = true;
    for (std::size_t i = 0; i < m; ++i) {
      double span = 0.0;
      for (const auto& f : front) span = std::max(span, f[i] - set.ideal[i]);
      set.intercepts[i] = span > 1e-12 ? span : 1.0;
    }
  }

  set.mapped.reserve(simplex.size());
  for (const auto& r : simplex) {
    Vector v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = r[i] * set.intercepts[i] + set.ideal[i];
    set.mapped.push_back(std::move(v));
  }
  return set;
}

}  // namespace maoeda
