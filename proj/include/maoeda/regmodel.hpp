#ifndef MAOEDA_REGMODEL_HPP
#define MAOEDA_REGMODEL_HPP

#include <cstddef>
#include <optional>
#include <utility>

#include "maoeda/common.hpp"
#include "maoeda/rng.hpp"

namespace maoeda {

/// Which trailing eigenvalues feed the noise variance.
enum class NoiseConvention {
  /// mean over the non-principal eigenvalues, divisor (k - i + 1)
  ExcludePrincipal,
  /// the printed form: sum starts at the last principal eigenvalue
  IncludeLastPrincipal,
};

/// Principal-subspace box plus isotropic Gaussian noise fitted to one
/// reference vector's neighbourhood.
struct RegularityModel {
  Vector mean;
  Matrix components;  // orthonormal principal directions, strongest first
  Vector lower;       // per-direction projection minimum
  Vector upper;       // per-direction projection maximum
  Vector eigenvalues; // full descending spectrum of the sample covariance
  double gamma = 0.5;
  double noise_variance = 0.0;
  bool degenerate = false;

  [[nodiscard]] std::size_t dimension() const { return mean.size(); }
  [[nodiscard]] std::size_t rank() const { return components.size(); }
};

/// Fits the model to `neighbors` (one decision vector per row). Keeps the
/// smallest number of components whose cumulative eigenvalue ratio reaches
/// `beta`. Throws std::invalid_argument for fewer than two neighbours.
RegularityModel build_submodel(const Matrix& neighbors, double beta, double gamma,
                               NoiseConvention noise = NoiseConvention::ExcludePrincipal);

/// Box the samples are clamped to, if any.
struct SampleBox {
  Vector lower;
  Vector upper;
};

/// Draws `count` points: mean + sum_j tau_j v_j + N(0, eps I), with tau_j
/// uniform on the enlarged interval [l - gamma(u-l), u + gamma(u-l)].
Matrix sample_model(const RegularityModel& model, std::size_t count, Rng& rng,
                    const std::optional<SampleBox>& box = std::nullopt);

}  // namespace maoeda

#endif
