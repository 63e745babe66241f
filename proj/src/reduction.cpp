#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maoeda/reduction.hpp"

namespace maoeda {

ReductionMap ReductionMap::identity(std::size_t n) {
  ReductionMap map;
  map.mean.assign(n, 0.0);
  map.retained.resize(n);
  for (std::size_t j = 0; j < n; ++j) map.retained[j] = j;
  map.components = n;
  return map;
}

ReductionMap reduce_dimensions(const Matrix& x, double alpha, double zero_tolerance, double relative_tolerance) {
  if (x.size() < 2) throw std::invalid_argument("reduce_dimensions needs at least 2 rows");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("reduce_dimensions: alpha must lie in (0,1]");
  if (zero_tolerance < 0.0 || relative_tolerance < 0.0 || relative_tolerance >= 1.0)
    throw std::invalid_argument("reduce_dimensions: tolerances must be non-negative and the relative one below 1");
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(x.front().size());
  Eigen::MatrixXd data(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(x[r].size()) != cols) throw std::invalid_argument("reduce_dimensions: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) data(r, c) = x[r][c];
  }

  ReductionMap map;
  const Eigen::RowVectorXd mu = data.colwise().mean();
  map.mean.assign(mu.data(), mu.data() + cols);
  const Eigen::MatrixXd centered = data.rowwise() - mu;

  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(rows - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigen returns ascending eigenvalues; walk them from the top.
  const Eigen::VectorXd values = eig.eigenvalues().cwiseMax(0.0);
  const double total = values.sum();
  // Identical rows still leave round-off of order (eps * |mu|)^2.
  const double scale = 1.0 + mu.cwiseAbs().maxCoeff();
  if (total <= 1e-28 * scale * scale * static_cast<double>(cols)) {
    map.degenerate = true;
    for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j) map.removed.push_back(j);
    return map;
  }
  Eigen::Index keep = 0;
  double cumulative = 0.0;
  while (keep < cols && cumulative / total < alpha) {
    cumulative += values(cols - 1 - keep);
    ++keep;
  }
  map.components = static_cast<std::size_t>(keep);
  const Eigen::MatrixXd basis = eig.eigenvectors().rightCols(keep);
  const Eigen::MatrixXd restored = centered * basis * basis.transpose();

  const Eigen::RowVectorXd mean_abs = restored.cwiseAbs().colwise().sum() / static_cast<double>(rows);
  const double floor = relative_tolerance * mean_abs.maxCoeff();
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto j = static_cast<std::size_t>(c);
    if (mean_abs(c) < zero_tolerance * (1.0 + std::abs(map.mean[j])) || mean_abs(c) < floor) {
      map.removed.push_back(j);
    } else {
      map.retained.push_back(j);
    }
  }
  return map;
}

Matrix translate_population(const Matrix& reduced, const ReductionMap& map) {
  Matrix out;
  out.reserve(reduced.size());
  for (const auto& row : reduced) {
    if (row.size() != map.reduced_dimension()) {
      throw std::invalid_argument("translate_population: row has " + std::to_string(row.size()) +
                                  " columns, map expects " + std::to_string(map.reduced_dimension()));
    }
    Vector full = map.mean;
    for (std::size_t l = 0; l < row.size(); ++l) full[map.retained[l]] += row[l];
    out.push_back(std::move(full));
  }
  return out;
}

Vector to_full_space(std::span<const double> reduced, const ReductionMap& map) {
  if (reduced.size() != map.reduced_dimension()) {
    throw std::invalid_argument("to_full_space: expected " + std::to_string(map.reduced_dimension()) +
                                " reduced coordinates, got " + std::to_string(reduced.size()));
  }
  Vector full = map.mean;
  for (std::size_t l = 0; l < reduced.size(); ++l) full[map.retained[l]] += reduced[l];
  for (double& v : full) v = std::clamp(v, 0.0, 1.0);
  return full;
}

Vector to_reduced_space(std::span<const double> full, const ReductionMap& map) {
  if (full.size() != map.full_dimension()) throw std::invalid_argument("to_reduced_space: length mismatch");
  Vector reduced(map.reduced_dimension());
  for (std::size_t l = 0; l < reduced.size(); ++l) reduced[l] = full[map.retained[l]] - map.mean[map.retained[l]];
  return reduced;
}

}  // namespace maoeda
