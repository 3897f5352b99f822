#include "opgp/inference.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "opgp/fredholm.hpp"

namespace opgp {

namespace {

double rel_change(double a, double b) {
  return std::abs(a - b) / (1.0 + std::abs(b));
}

}  // namespace

FitResult fit_mixed_functional(const GridFunction& f, double tol,
                               std::size_t max_iter) {
  const double nrm2 = inner_product(f, f);
  if (nrm2 == 0.0) throw std::invalid_argument("no data");
  const double mean = integral(f);
  const double mean2 = mean * mean;

  // Coordinate descent on alpha^-1 Q(delta) + log alpha + log(1 + delta),
  // Q(delta) = ||f||^2 - delta/(delta+1) (int f)^2.  Both coordinate updates
  // are exact minimizers, so the objective trace is non-increasing.
  auto objective = [&](double alpha, double delta) {
    return (nrm2 - delta / (delta + 1.0) * mean2) / alpha + std::log(alpha) +
           std::log1p(delta);
  };

  FitResult out;
  out.route = FitRoute::functional;
  double alpha = nrm2;
  double delta = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double delta_new = std::max(0.0, mean2 / alpha - 1.0);
    const double alpha_new = nrm2 - delta_new / (delta_new + 1.0) * mean2;
    const double change =
        std::max(rel_change(delta_new, delta), rel_change(alpha_new, alpha));
    delta = delta_new;
    alpha = alpha_new;
    out.iterations = it;
    out.objective_trace.push_back(objective(alpha, delta));
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.params = mixed_model(alpha, delta);
  out.loglik = objective(alpha, delta);
  return out;
}

FitResult fit_mixed_mv(std::span<const double> y, double tol,
                       std::size_t max_iter) {
  if (y.empty()) throw std::invalid_argument("no data");
  const double n = static_cast<double>(y.size());
  double s = 0.0, ss = 0.0;
  for (double v : y) {
    s += v;
    ss += v * v;
  }
  if (ss == 0.0) throw std::invalid_argument("no data");
  const double mean = s * (1.0 / n);

  // Multivariate objective over M = alpha (I + d J):
  //   y' M^-1 y + log det M
  //     = alpha^-1 [sum y^2 - d/(1+nd) (sum y)^2] + n log alpha + log(1+nd).
  // d is the per-coordinate level weight; its exact coordinate minimizer is
  // the printed profile max(0, alpha^-1 (mean y)^2 - 1/n).
  auto q_of = [&](double d) { return ss - d / (1.0 + n * d) * (s * s); };
  auto objective = [&](double alpha, double d) {
    return q_of(d) / alpha + n * std::log(alpha) + std::log1p(n * d);
  };

  FitResult out;
  out.route = FitRoute::multivariate;
  double alpha = ss / n;
  double d = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double d_new = std::max(0.0, (mean * mean) / alpha - 1.0 / n);
    const double alpha_new = q_of(d_new) / n;
    const double change =
        std::max(rel_change(d_new, d), rel_change(alpha_new, alpha));
    d = d_new;
    alpha = alpha_new;
    out.iterations = it;
    out.objective_trace.push_back(objective(alpha, d));
    if (change < tol) {
      out.converged = true;
      break;
    }
  }
  out.params = mixed_model(alpha, d);
  out.loglik = objective(alpha, d);
  return out;
}

FitResult fit_bm_noise(const GridFunction& f, std::size_t n_pen, double tol,
                       std::size_t max_iter) {
  if (inner_product(f, f) == 0.0) throw std::invalid_argument("no data");
  if (n_pen == 0) throw std::invalid_argument("n_pen must be positive");
  const double c = 1.0 / static_cast<double>(n_pen);

  // Objective (the normalized-multivariate bookkeeping, in which the alpha
  // penalty is log alpha^2 = 2 log alpha):
  //   V(lambda)/alpha^2 + 2 log alpha + c log cosh lambda,
  // V the quadratic-form numerator ||g||^2.  Stationarity in alpha gives the
  // closed profile alpha^2 = V(lambda), leaving a 1-D search in log lambda
  // over the profiled objective 1 + log V(lambda) + c log cosh lambda.
  auto v_of = [&](double lambda) {
    const GridFunction g = volterra_solve(f, lambda);
    return inner_product(g, g);
  };
  auto objective = [&](double x) {
    const double lambda = std::exp(x);
    const double value = 1.0 + std::log(v_of(lambda)) + c * log_cosh(lambda);
    if (!std::isfinite(value)) {
      throw std::runtime_error("objective not finite at lambda=" +
                               std::to_string(lambda));
    }
    return value;
  };

  const double x_lo_box = std::log(1e-3);
  const double x_hi_box = std::log(1e3);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

  FitResult out;
  out.route = FitRoute::functional;
  double a = x_lo_box, b = x_hi_box;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    out.iterations = it;
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = objective(x2);
    }
    out.objective_trace.push_back(std::min(f1, f2));
    if (b - a < tol) {
      out.converged = true;
      break;
    }
  }
  const double x_hat = 0.5 * (a + b);
  const double lambda_hat = std::exp(x_hat);
  const double alpha_hat = std::sqrt(v_of(lambda_hat));
  // Ties on flat stretches can drift the bracket a few ulps-in-x off a box
  // edge, so flag anything within 5% of an edge in log space.
  out.at_bound = (x_hat - x_lo_box < 0.05) || (x_hi_box - x_hat < 0.05);
  out.params = bm_noise_model(alpha_hat, lambda_hat);
  out.loglik = objective(x_hat);
  return out;
}

}  // namespace opgp
