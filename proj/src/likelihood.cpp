#include "opgp/likelihood.hpp"

#include <cmath>
#include <stdexcept>

#include "opgp/fredholm.hpp"

namespace opgp {

double mv_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("covariance matrix must be square");
  }
  if (y.size() != m.rows()) {
    throw std::invalid_argument("data and covariance dimensions differ");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("matrix not positive definite");
  }
  const Eigen::VectorXd x = llt.solve(y);
  double log_det = 0.0;
  const auto l = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) log_det += std::log(l(i, i));
  return y.dot(x) + 2.0 * log_det;
}

double quad_form_mixed(const GridFunction& f, double alpha, double delta) {
  if (!(alpha > 0.0)) throw std::invalid_argument("quad form needs alpha > 0");
  if (!(delta >= 0.0)) throw std::invalid_argument("quad form needs delta >= 0");
  // Rank-one inverse: (I + delta <.,1>1)^-1 = I - delta/(delta+1) <.,1>1.
  const double nrm2 = inner_product(f, f);
  const double mean = integral(f);
  return (nrm2 - delta / (delta + 1.0) * (mean * mean)) / alpha;
}

GridFunction volterra_solve(const GridFunction& f, double lambda) {
  if (f.n == 0 || f.values.size() != f.n) {
    throw std::invalid_argument("grid function has inconsistent size");
  }
  const std::size_t n = f.n;
  const double h = f.length / static_cast<double>(n);
  GridFunction g = f;
  // g_i + lambda * h * [ sum_{j<i} tanh(lambda m_j) g_j
  //                      + (1/2) tanh(lambda m_i) g_i ] = f_i,
  // solved by forward substitution with a running weighted sum.
  double running = 0.0;  // sum_{j<i} tanh(lambda m_j) g_j
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = std::tanh(lambda * f.midpoint(i));
    const double gi =
        (f.values[i] - lambda * h * running) / (1.0 + 0.5 * lambda * h * ti);
    g.values[i] = gi;
    running += ti * gi;
  }
  return g;
}

double quad_form_bm(const GridFunction& f, double alpha, double lambda) {
  if (!(alpha > 0.0)) throw std::invalid_argument("quad form needs alpha > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("quad form needs lambda > 0");
  const GridFunction g = volterra_solve(f, lambda);
  // I + lambda^2 Min = (I+V)(I+V)*, so the quadratic form is ||g||^2.
  return inner_product(g, g) / (alpha * alpha);
}

LoglikValue functional_loglik(const GridFunction& f, const ModelParams& model,
                              bool corrected, std::size_t n_pen) {
  if (corrected && n_pen == 0) {
    throw std::invalid_argument("corrected likelihood needs a positive n_pen");
  }
  LoglikValue out;
  out.corrected = corrected;
  out.n_used = corrected ? n_pen : f.n;
  const double c = corrected ? 1.0 / static_cast<double>(n_pen) : 1.0;
  switch (model.family) {
    case ModelFamily::mixed:
      out.quad = quad_form_mixed(f, model.alpha, model.delta);
      break;
    case ModelFamily::bm_noise:
      out.quad = quad_form_bm(f, model.alpha, model.lambda);
      break;
    case ModelFamily::ou:
      throw std::invalid_argument("no functional likelihood for family ou");
  }
  out.log_d_term = std::log(model.alpha);
  out.det_term = c * fredholm_det_analytic(model).log_det;
  out.total = out.quad + out.log_d_term + out.det_term;
  return out;
}

double profile_delta_functional_raw(const GridFunction& f, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("profile needs alpha > 0");
  const double mean = integral(f);
  return (mean * mean) / alpha - 1.0;
}

double profile_delta_functional(const GridFunction& f, double alpha) {
  return std::max(0.0, profile_delta_functional_raw(f, alpha));
}

double profile_delta_mv_raw(std::span<const double> y, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("profile needs alpha > 0");
  if (y.empty()) throw std::invalid_argument("no data");
  const double n = static_cast<double>(y.size());
  double s = 0.0;
  for (double v : y) s += v;
  const double mean = s * (1.0 / n);
  return (mean * mean) / alpha - 1.0 / n;
}

double profile_delta_mv(std::span<const double> y, double alpha) {
  return std::max(0.0, profile_delta_mv_raw(y, alpha));
}

}  // namespace opgp
