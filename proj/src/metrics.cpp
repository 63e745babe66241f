#include <cmath>
#include <limits>
#include <stdexcept>

#include "maoeda/metrics.hpp"

namespace maoeda {

Matrix normalize(const Matrix& points, std::span<const double> ideal, std::span<const double> nadir) {
  if (ideal.size() != nadir.size()) throw std::invalid_argument("normalize: ideal/nadir size mismatch");
  for (std::size_t i = 0; i < ideal.size(); ++i)
    if (!(nadir[i] > ideal[i])) throw std::invalid_argument("normalize: nadir must exceed ideal in every objective");
  Matrix out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (p.size() != ideal.size()) throw std::invalid_argument("normalize: point dimension mismatch");
    Vector q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = (p[i] - ideal[i]) / (nadir[i] - ideal[i]);
    out.push_back(std::move(q));
  }
  return out;
}

double igd(const Matrix& solutions, const Matrix& reference) {
  if (solutions.empty()) throw std::invalid_argument("igd: empty solution set");
  if (reference.empty()) throw std::invalid_argument("igd: empty reference set");
  const std::size_t m = reference.front().size();
  for (const auto& s : solutions)
    if (s.size() != m) throw std::invalid_argument("igd: dimension mismatch");
  double total = 0.0;
  for (const auto& r : reference) {
    if (r.size() != m) throw std::invalid_argument("igd: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : solutions) {
      double d2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = s[i] - r[i];
        d2 += d * d;
        if (d2 >= best) break;
      }
      best = std::min(best, d2);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(reference.size());
}

std::string comparison_symbol(Comparison c) {
  switch (c) {
    case Comparison::Better:
      return "+";
    case Comparison::Worse:
      return "-";
    case Comparison::Equal:
      break;
  }
  return "=";
}

}  // namespace maoeda
