#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>

#include "opgp/grid.hpp"
#include "opgp/models.hpp"

namespace opgp {

/// Value of a (negative, constant-dropped) log-likelihood split into its
/// three printed terms: total = quad + log_d_term + det_term.
struct LoglikValue {
  double total = 0.0;
  double quad = 0.0;        ///< quadratic form in the data
  double log_d_term = 0.0;  ///< log alpha (multiplier factor) for both families
  double det_term = 0.0;    ///< c * log Fredholm determinant, c = 1 or 1/n_pen
  bool corrected = false;   ///< determinant penalty scaled by 1/n_pen
  std::size_t n_used = 0;   ///< n_pen when corrected, else the data grid size
};

/// Multivariate Gaussian negative log-likelihood (constants dropped):
/// y' M^-1 y + log det M, via Cholesky.  Throws std::runtime_error
/// ("matrix not positive definite") if M fails LLT, std::invalid_argument on
/// dimension mismatch.
double mv_loglik(const Eigen::VectorXd& y, const Eigen::MatrixXd& m);

/// Quadratic form alpha^-1 <f, (I + delta <., 1> 1)^-1 f> of the mixed
/// family, by Sherman-Morrison:
/// alpha^-1 (||f||^2 - delta/(delta + 1) (int f)^2).
double quad_form_mixed(const GridFunction& f, double alpha, double delta);

/// Solve the Volterra equation g(t) + lambda int_0^t tanh(lambda s) g(s) ds
/// = f(t) in O(n) by forward substitution on f's grid (triangular midpoint
/// discretization, half weight on the diagonal edge).  V denotes that
/// Volterra operator below.
GridFunction volterra_solve(const GridFunction& f, double lambda);

/// Quadratic form alpha^-2 <f, (I + lambda^2 Min)^-1 f> of the bm_noise
/// family in O(n): alpha^-2 ||g||^2 where g = volterra_solve(f, lambda)
/// (the covariance factors as (I + V)(I + V)* with V the Volterra operator,
/// so the quadratic form is the squared norm of the forward solve).
double quad_form_bm(const GridFunction& f, double alpha, double lambda);

/// Functional log-likelihood of the mixed or bm_noise family:
///   mixed:    quad_form_mixed + log alpha + c log(1 + delta)
///   bm_noise: quad_form_bm    + log alpha + c log cosh lambda
/// with c = 1 (uncorrected) or 1/n_pen (corrected; the penalty scaling under
/// which the functional value matches 1/n times the multivariate one).
/// Determinants come from fredholm_det_analytic.  Throws
/// std::invalid_argument for the ou family ("no functional likelihood for
/// family ou") and when corrected && n_pen == 0.
LoglikValue functional_loglik(const GridFunction& f, const ModelParams& model,
                              bool corrected = false, std::size_t n_pen = 0);

/// Functional profile estimate of delta at fixed alpha:
/// max(0, alpha^-1 (int f)^2 - 1); _raw omits the clamp at zero.
double profile_delta_functional(const GridFunction& f, double alpha);
double profile_delta_functional_raw(const GridFunction& f, double alpha);

/// Multivariate profile estimate of delta at fixed alpha from raw samples:
/// max(0, alpha^-1 n^-2 (sum y)^2 - 1/n); _raw omits the clamp.  This is the
/// exact minimizer over the per-coordinate level weight d of
/// y' (alpha(I + d J))^-1 y + log det(alpha(I + d J)), J the all-ones matrix.
/// The raw variants satisfy functional_raw = mv_raw - (n-1)/n exactly when f
/// embeds y on a matching grid.
double profile_delta_mv(std::span<const double> y, double alpha);
double profile_delta_mv_raw(std::span<const double> y, double alpha);

}  // namespace opgp
