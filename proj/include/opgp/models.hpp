#pragma once

#include <string>

#include "opgp/operators.hpp"

namespace opgp {

/// Parametric model families for noisy functional observations.
///
///   mixed     white noise plus a random level: variance operator
///             alpha (I + delta <., 1> 1), parameters alpha > 0, delta >= 0.
///   bm_noise  white noise plus an independent Brownian signal: variance
///             operator alpha^2 (I + lambda^2 Min), parameters alpha > 0,
///             lambda > 0 (Min the Brownian covariance operator).
///   ou        Ornstein-Uhlenbeck path model on [0, horizon]; sampling and
///             pointwise covariance only, no likelihood.
enum class ModelFamily { mixed, bm_noise, ou };

struct ModelParams {
  ModelFamily family = ModelFamily::mixed;
  double alpha = 1.0;    ///< noise scale (variance for mixed, sd for bm_noise)
  double delta = 0.0;    ///< mixed: level variance ratio
  double lambda = 0.0;   ///< bm_noise: signal scale; ou: mean reversion
  double horizon = 10.0; ///< ou: right end of the time domain
};

/// Validated constructors; throw std::invalid_argument on parameter-domain
/// violations (alpha <= 0, delta < 0, lambda <= 0 where required).
ModelParams mixed_model(double alpha, double delta);
ModelParams bm_noise_model(double alpha, double lambda);
ModelParams ou_model(double alpha, double lambda, double horizon = 10.0);

/// The operator defining the model:
///   mixed     composite_dkd(D = sqrt(alpha), K = ones(delta))
///   bm_noise  composite_dkd(D = alpha, K = brownian(lambda))
///   ou        triangular integral with the decaying OU factor kernel
OperatorSpec to_operator(const ModelParams& model);

std::string family_name(ModelFamily family);
ModelFamily parse_family(const std::string& name);

}  // namespace opgp
