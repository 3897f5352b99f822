#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace opgp {

/// Piecewise-constant function on a regular grid of n cells over [0, length].
///
/// Cell i (0-based) is the interval (i/n, (i+1)/n] * length and carries the
/// single value values[i], interpreted as the function value at the cell
/// midpoint m_i = (i + 1/2) / n * length.  All quadrature in this library is
/// the midpoint rule on this grid, so the L2 inner product of two grid
/// functions is (length/n) * sum_i f_i * g_i.
struct GridFunction {
  std::size_t n = 0;
  double length = 1.0;  ///< right end of the domain; 1 unless stated otherwise
  std::vector<double> values;

  double midpoint(std::size_t i) const {
    return (static_cast<double>(i) + 0.5) / static_cast<double>(n) * length;
  }
};

/// Sample a scalar function at the n cell midpoints.
GridFunction make_grid_function(std::size_t n,
                                const std::function<double(double)>& fn,
                                double length = 1.0);

/// Constant-one grid function (the embedded indicator of the whole domain).
GridFunction ones_grid(std::size_t n, double length = 1.0);

/// Midpoint-rule inner product (length/n) * sum_i f_i g_i.
/// Throws std::invalid_argument on grid size or domain mismatch.
double inner_product(const GridFunction& f, const GridFunction& g);

/// sqrt(inner_product(f, f)).
double norm(const GridFunction& f);

/// Midpoint-rule integral (length/n) * sum_i f_i.
double integral(const GridFunction& f);

/// Grid approximation of the indicator of [a, b] on the n-cell unit grid.
/// Each cell carries the fraction of the cell covered by [a, b], scaled by n
/// (i.e. overlap measure divided by cell measure), so that for grid-aligned
/// endpoints the result is exactly 0/1-valued and ||indicator||^2 = b - a.
/// Requires 0 <= a < b <= 1; throws std::invalid_argument otherwise.
GridFunction indicator(double a, double b, std::size_t n);

/// Scattered observations (u_k, y_k) with locations u_k in [0, 1].
struct Samples {
  std::vector<double> u;
  std::vector<double> y;
};

/// Embed scattered samples as a piecewise-constant grid function.
///
/// A sample at location u lands in cell ceil(u * n) (1-based; u = 0 goes to
/// cell 1).  Cells holding several samples average them; empty cells copy the
/// value of the nearest non-empty cell, preferring the lower index on ties.
/// Throws std::invalid_argument if any u is outside [0, 1] or no samples are
/// given.
GridFunction embed_piecewise_constant(const Samples& samples, std::size_t n);

/// Read two-column CSV data (u, y).  A first line whose first field is not
/// numeric is treated as a header and skipped.  Accepts LF and CRLF endings.
/// Throws std::invalid_argument on malformed rows.
Samples read_samples_csv(std::istream& in);

/// Convenience wrapper: open the file and delegate to read_samples_csv.
/// Throws std::invalid_argument if the file cannot be opened.
Samples read_samples_csv_file(const std::string& path);

}  // namespace opgp
