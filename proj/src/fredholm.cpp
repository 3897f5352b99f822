#include "opgp/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "opgp/linalg.hpp"
#include "opgp/operators.hpp"

namespace opgp {

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

namespace {

constexpr std::size_t kMaxSeriesGrid = 64;
constexpr std::size_t kMaxSeriesOrder = 6;

/// Determinant of a small k-by-k matrix (k <= 6) by in-place partial-pivot
/// elimination; returns 0 for an exactly singular pivot column.
double det_small(double* a, int k) {
  double det = 1.0;
  for (int c = 0; c < k; ++c) {
    int p = c;
    double best = std::abs(a[c * k + c]);
    for (int r = c + 1; r < k; ++r) {
      const double v = std::abs(a[r * k + c]);
      if (v > best) {
        best = v;
        p = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (p != c) {
      for (int cc = 0; cc < k; ++cc) std::swap(a[c * k + cc], a[p * k + cc]);
      det = -det;
    }
    const double piv = a[c * k + c];
    det *= piv;
    for (int r = c + 1; r < k; ++r) {
      const double m = a[r * k + c] / piv;
      for (int cc = c + 1; cc < k; ++cc) a[r * k + cc] -= m * a[c * k + cc];
    }
  }
  return det;
}

/// Sum of the order-k principal minors of the kernel table whose first index
/// is i1 (remaining indices strictly increasing above i1).  Walking the
/// combinations per first index gives the parallel loop fixed work packets
/// whose partial sums are later combined in ascending order, so the result
/// does not depend on the thread schedule.
double minor_sum_for_first_index(const Eigen::MatrixXd& kt, int gn, int k,
                                 int i1) {
  double acc = 0.0;
  double minor[kMaxSeriesOrder * kMaxSeriesOrder];
  std::vector<int> idx(static_cast<std::size_t>(k));
  idx[0] = i1;
  if (k == 1) {
    minor[0] = kt(i1, i1);
    return minor[0];
  }
  // Initialize the k-1 trailing indices to the first combination above i1.
  for (int j = 1; j < k; ++j) idx[j] = i1 + j;
  if (idx[k - 1] >= gn) return 0.0;
  while (true) {
    for (int p = 0; p < k; ++p) {
      for (int q = 0; q < k; ++q) {
        minor[p * k + q] = kt(idx[p], idx[q]);
      }
    }
    acc += det_small(minor, k);
    // Advance the trailing combination (odometer with strictly increasing
    // digits bounded by gn).
    int pos = k - 1;
    while (pos >= 1) {
      if (idx[pos] + (k - 1 - pos) < gn - 1) {
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      --pos;
    }
    if (pos == 0) break;
  }
  return acc;
}

DetResult fredholm_det_series_impl(const Kernel& k, std::size_t grid_n,
                                   std::size_t k_max, bool parallel) {
  if (grid_n == 0 || grid_n > kMaxSeriesGrid) {
    throw std::invalid_argument("series grid must be in [1, 64]");
  }
  if (k_max == 0 || k_max > kMaxSeriesOrder) {
    throw std::invalid_argument("series truncation must be in [1, 6]");
  }
  const Eigen::MatrixXd kt = serial::kernel_matrix(k, grid_n);
  const double h = k.domain_length() / static_cast<double>(grid_n);
  const int gn = static_cast<int>(grid_n);

  // d(K) = 1 + sum_k h^k * (sum of order-k principal minors); the minor sum
  // is the k-fold midpoint quadrature of the determinant integral restricted
  // to strictly increasing tuples (tuples with a repeated node have two equal
  // rows and vanish, and each unordered tuple appears k! times, cancelling
  // the 1/k!).
  double det = 1.0;
  for (std::size_t order = 1; order <= k_max; ++order) {
    std::vector<double> partial(grid_n, 0.0);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::int64_t i1 = 0; i1 < gn; ++i1) {
      partial[i1] = minor_sum_for_first_index(kt, gn, static_cast<int>(order),
                                              static_cast<int>(i1));
    }
    double term = 0.0;
    for (std::size_t i = 0; i < grid_n; ++i) term += partial[i];
    det += std::pow(h, static_cast<double>(order)) * term;
  }

  DetResult out;
  out.det = det;
  out.log_valid = det > 0.0;
  out.log_det = out.log_valid ? std::log(det) : 0.0;
  out.route = DetRoute::series;
  out.grid_n = grid_n;
  out.k_max = k_max;
  return out;
}

}  // namespace

DetResult fredholm_det_series(const Kernel& k, std::size_t grid_n,
                              std::size_t k_max) {
  return fredholm_det_series_impl(k, grid_n, k_max, true);
}

namespace serial {
DetResult fredholm_det_series(const Kernel& k, std::size_t grid_n,
                              std::size_t k_max) {
  return fredholm_det_series_impl(k, grid_n, k_max, false);
}
}  // namespace serial

DetResult fredholm_det_matrix(const Kernel& k, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  const double h = k.domain_length() / static_cast<double>(n);
  Eigen::MatrixXd q = kernel_matrix(k, n) * h;
  q.diagonal().array() += 1.0;
  const LogDetResult ld = log_det_lu(q);

  DetResult out;
  out.log_valid = ld.sign > 0;
  out.log_det = out.log_valid ? ld.log_abs_det : 0.0;
  out.det = static_cast<double>(ld.sign) * std::exp(ld.log_abs_det);
  out.route = DetRoute::matrix;
  out.grid_n = n;
  return out;
}

DetResult fredholm_det_analytic(const ModelParams& model) {
  DetResult out;
  out.route = DetRoute::analytic;
  switch (model.family) {
    case ModelFamily::mixed:
      out.det = 1.0 + model.delta;
      out.log_valid = out.det > 0.0;
      out.log_det = out.log_valid ? std::log1p(model.delta) : 0.0;
      return out;
    case ModelFamily::bm_noise:
      out.det = std::cosh(model.lambda);
      out.log_det = log_cosh(model.lambda);
      out.log_valid = true;
      return out;
    case ModelFamily::ou:
      break;
  }
  throw std::invalid_argument("no closed-form determinant for family ou");
}

MultiplierLogDet log_det_multiplication(const PointwiseFn& d, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  if (!d.fn) throw std::invalid_argument("multiplier needs a callable");
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = d((static_cast<double>(i) + 0.5) / static_cast<double>(n));
    if (!(v > 0.0)) throw std::runtime_error("multiplier not positive");
    acc += std::log(v);
  }
  MultiplierLogDet out;
  out.normalized_log_det = acc / static_cast<double>(n);
  out.integral_log = out.normalized_log_det;  // same midpoint sum by construction
  return out;
}

}  // namespace opgp
