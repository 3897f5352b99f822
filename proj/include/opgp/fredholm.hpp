#pragma once

#include <cstddef>
#include <functional>

#include "opgp/kernels.hpp"
#include "opgp/models.hpp"

namespace opgp {

enum class DetRoute { series, matrix, analytic };

struct DetResult {
  double det = 1.0;       ///< d(K), the determinant itself
  double log_det = 0.0;   ///< log d(K); meaningful only if log_valid
  bool log_valid = true;  ///< false when d(K) <= 0
  DetRoute route = DetRoute::analytic;
  std::size_t grid_n = 0;  ///< quadrature / discretization grid (0: analytic)
  std::size_t k_max = 0;   ///< series truncation order (0: not the series)
};

/// Fredholm determinant d(K) = sum_k (1/k!) int...int det[K(x_p, x_q)] dx by
/// truncated series, each k-fold integral evaluated by the midpoint product
/// rule on grid_n nodes.  The quadrature sum collapses to principal minors
/// over strictly increasing index tuples (repeated nodes give singular
/// minors), which is how it is computed; terms are accumulated in ascending
/// k.  Cost grows like C(grid_n, k_max), so grid_n <= 64 and k_max <= 6 are
/// enforced (std::invalid_argument beyond, or if k_max == 0).
DetResult fredholm_det_series(const Kernel& k, std::size_t grid_n,
                              std::size_t k_max);

/// Fredholm determinant via the n-by-n discretization det(I + (1/n) K(m_i,
/// m_j)) computed by LU with log accumulation.  log_valid is false for a
/// negative determinant; an exactly singular factor throws
/// std::runtime_error ("determinant zero").
DetResult fredholm_det_matrix(const Kernel& k, std::size_t n);

/// Closed forms: mixed family d = 1 + delta, bm_noise family d = cosh(lambda)
/// (log_det via the overflow-stable log_cosh).  Throws std::invalid_argument
/// for families without a closed form (ou).
DetResult fredholm_det_analytic(const ModelParams& model);

/// log det of the multiplication-operator factor: both the Riemann sum
/// (1/n) sum_i log D(m_i) of log det S_n and the midpoint integral of log D
/// -- the same number by construction, reported under both names.
/// Throws std::runtime_error ("multiplier not positive") if any D(m_i) <= 0.
struct MultiplierLogDet {
  double normalized_log_det = 0.0;  ///< (1/n) log det diag(D(m_i))
  double integral_log = 0.0;        ///< midpoint integral of log D
};
MultiplierLogDet log_det_multiplication(const PointwiseFn& d, std::size_t n);

/// Overflow-stable log cosh: |x| + log1p(exp(-2|x|)) - log 2.
double log_cosh(double x);

namespace serial {
/// Reference serial sweep of the series route (same tuple enumeration, no
/// OpenMP); required to agree bit-for-bit with fredholm_det_series.
DetResult fredholm_det_series(const Kernel& k, std::size_t grid_n,
                              std::size_t k_max);
}  // namespace serial

}  // namespace opgp
