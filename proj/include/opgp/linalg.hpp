#pragma once

#include <Eigen/Dense>

namespace opgp {

/// Lower Cholesky factor of a symmetric positive semi-definite matrix.
///
/// Exact PSD matrices (e.g. Gram matrices of linearly dependent functionals)
/// can fail a strict LLT; retry with diagonal jitter 1e-12 * max diagonal
/// added up to three times before giving up.  Throws std::runtime_error
/// ("covariance not PSD") if the matrix still fails, std::invalid_argument if
/// it is not square.
struct CholResult {
  Eigen::MatrixXd L;
  double jitter = 0.0;  ///< total diagonal shift that was needed
};
CholResult cholesky_psd(const Eigen::MatrixXd& a);

/// log det and determinant sign via partial-pivot LU.
/// Throws std::runtime_error ("determinant zero") on an exactly singular
/// factor.
struct LogDetResult {
  double log_abs_det = 0.0;
  int sign = 1;
};
LogDetResult log_det_lu(const Eigen::MatrixXd& a);

}  // namespace opgp
