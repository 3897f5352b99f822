#include "opgp/models.hpp"

#include <cmath>
#include <stdexcept>

namespace opgp {

ModelParams mixed_model(double alpha, double delta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("mixed model needs alpha > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("mixed model needs delta >= 0");
  ModelParams m;
  m.family = ModelFamily::mixed;
  m.alpha = alpha;
  m.delta = delta;
  return m;
}

ModelParams bm_noise_model(double alpha, double lambda) {
  if (!(alpha > 0.0)) throw std::invalid_argument("bm-noise model needs alpha > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("bm-noise model needs lambda > 0");
  ModelParams m;
  m.family = ModelFamily::bm_noise;
  m.alpha = alpha;
  m.lambda = lambda;
  return m;
}

ModelParams ou_model(double alpha, double lambda, double horizon) {
  if (!(alpha > 0.0)) throw std::invalid_argument("ou model needs alpha > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("ou model needs lambda > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("ou model needs horizon > 0");
  ModelParams m;
  m.family = ModelFamily::ou;
  m.alpha = alpha;
  m.lambda = lambda;
  m.horizon = horizon;
  return m;
}

OperatorSpec to_operator(const ModelParams& model) {
  switch (model.family) {
    case ModelFamily::mixed:
      return OperatorSpec::composite_dkd(const_fn(std::sqrt(model.alpha)),
                                         ones_kernel(model.delta));
    case ModelFamily::bm_noise:
      return OperatorSpec::composite_dkd(const_fn(model.alpha),
                                         brownian_kernel(model.lambda));
    case ModelFamily::ou:
      return OperatorSpec::integral(
          ou_kernel(model.alpha, model.lambda, model.horizon));
  }
  throw std::invalid_argument("unknown model family");
}

std::string family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::mixed:
      return "mixed";
    case ModelFamily::bm_noise:
      return "bm-noise";
    case ModelFamily::ou:
      return "ou";
  }
  throw std::invalid_argument("unknown model family");
}

ModelFamily parse_family(const std::string& name) {
  if (name == "mixed") return ModelFamily::mixed;
  if (name == "bm-noise" || name == "bm_noise") return ModelFamily::bm_noise;
  if (name == "ou") return ModelFamily::ou;
  throw std::invalid_argument("unknown model family: '" + name + "'");
}

}  // namespace opgp
