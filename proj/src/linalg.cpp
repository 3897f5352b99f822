#include "opgp/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace opgp {

CholResult cholesky_psd(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky needs a square matrix");
  }
  const double max_diag = a.diagonal().maxCoeff();
  if (max_diag <= 0.0) {
    // A PSD matrix with no positive diagonal entry is identically zero; its
    // Cholesky factor is the zero matrix (LLT itself rejects a zero pivot).
    if (max_diag == 0.0 && a.cwiseAbs().maxCoeff() == 0.0) {
      return CholResult{Eigen::MatrixXd::Zero(a.rows(), a.cols()), 0.0};
    }
    throw std::runtime_error("covariance not PSD");
  }
  const double base = 1e-12 * max_diag;
  Eigen::MatrixXd work = a;
  double total = 0.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    if (attempt > 0) {
      work.diagonal().array() += base;
      total += base;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      return CholResult{llt.matrixL(), total};
    }
  }
  throw std::runtime_error("covariance not PSD");
}

LogDetResult log_det_lu(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("log det needs a square matrix");
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  LogDetResult out;
  out.sign = lu.permutationP().determinant() < 0 ? -1 : 1;
  const auto diag = lu.matrixLU().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double d = diag(i);
    if (d == 0.0) throw std::runtime_error("determinant zero");
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs_det += std::log(std::abs(d));
  }
  return out;
}

}  // namespace opgp
