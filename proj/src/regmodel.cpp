#include "maoeda/regmodel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maoeda {

RegularityModel build_submodel(const Matrix& neighbors, double beta, double gamma, NoiseConvention noise) {
  if (neighbors.size() < 2) {
    throw std::invalid_argument("build_submodel needs at least 2 neighbours, got " +
                                std::to_string(neighbors.size()));
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("build_submodel: beta must lie in (0,1]");
  if (gamma < 0.0) throw std::invalid_argument("build_submodel: gamma must be non-negative");

  const auto rows = static_cast<Eigen::Index>(neighbors.size());
  const auto dim = static_cast<Eigen::Index>(neighbors.front().size());
  Eigen::MatrixXd data(rows, dim);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(neighbors[r].size()) != dim) throw std::invalid_argument("build_submodel: ragged rows");
    for (Eigen::Index c = 0; c < dim; ++c) data(r, c) = neighbors[r][c];
  }

  RegularityModel model;
  model.gamma = gamma;
  const Eigen::RowVectorXd mu = data.colwise().mean();
  model.mean.assign(mu.data(), mu.data() + dim);
  if (dim == 0) {
    model.degenerate = true;
    return model;
  }
  const Eigen::MatrixXd centered = data.rowwise() - mu;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(rows - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const Eigen::VectorXd ascending = eig.eigenvalues().cwiseMax(0.0);
  model.eigenvalues.resize(static_cast<std::size_t>(dim));
  for (Eigen::Index j = 0; j < dim; ++j) model.eigenvalues[j] = ascending(dim - 1 - j);
  // Eigenvalues at round-off level relative to the leading one are zero.
  for (double& v : model.eigenvalues)
    if (v < 1e-13 * model.eigenvalues.front()) v = 0.0;

  double total = 0.0;
  for (double v : model.eigenvalues) total += v;
  // Relative floor: round-off in an all-equal neighbourhood is not spread.
  const double scale = std::max(1.0, data.cwiseAbs().maxCoeff());
  if (total <= 1e-24 * scale * scale) {
    model.degenerate = true;
    return model;
  }

  std::size_t keep = 0;
  double cumulative = 0.0;
  while (keep < model.eigenvalues.size() && cumulative / total < beta) {
    cumulative += model.eigenvalues[keep];
    ++keep;
  }

  const Eigen::MatrixXd basis = eig.eigenvectors().rowwise().reverse().leftCols(static_cast<Eigen::Index>(keep));
  const Eigen::MatrixXd projected = centered * basis;
  for (std::size_t j = 0; j < keep; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    model.components.emplace_back(basis.col(col).data(), basis.col(col).data() + dim);
    model.lower.push_back(projected.col(col).minCoeff());
    model.upper.push_back(projected.col(col).maxCoeff());
  }

  const std::size_t k = model.eigenvalues.size();
  const std::size_t first = noise == NoiseConvention::ExcludePrincipal ? keep : keep - 1;
  double tail = 0.0;
  for (std::size_t j = first; j < k; ++j) tail += model.eigenvalues[j];
  model.noise_variance = tail / static_cast<double>(k - keep + 1);
  return model;
}

Matrix sample_model(const RegularityModel& model, std::size_t count, Rng& rng, const std::optional<SampleBox>& box) {
  const std::size_t dim = model.dimension();
  if (box && (box->lower.size() != dim || box->upper.size() != dim)) {
    throw std::invalid_argument("sample_model: box dimension mismatch");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sigma = std::sqrt(std::max(0.0, model.noise_variance));
  Matrix out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vector x = model.mean;
    for (std::size_t j = 0; j < model.rank(); ++j) {
      const double width = model.upper[j] - model.lower[j];
      const double lo = model.lower[j] - model.gamma * width;
      const double hi = model.upper[j] + model.gamma * width;
      const double tau = lo + (hi - lo) * unit(rng);
      const auto& v = model.components[j];
      for (std::size_t c = 0; c < dim; ++c) x[c] += tau * v[c];
    }
    if (sigma > 0.0) {
      for (double& c : x) c += sigma * normal(rng);
    }
    if (box) {
      for (std::size_t c = 0; c < dim; ++c) x[c] = std::clamp(x[c], box->lower[c], box->upper[c]);
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace maoeda
