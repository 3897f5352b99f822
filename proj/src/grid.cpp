#include "opgp/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace opgp {

namespace {

void check_same_grid(const GridFunction& f, const GridFunction& g) {
  if (f.n != g.n) {
    throw std::invalid_argument("grid size mismatch: " + std::to_string(f.n) +
                                " vs " + std::to_string(g.n));
  }
  if (f.length != g.length) {
    throw std::invalid_argument("grid domain mismatch");
  }
}

void check_nonempty(const GridFunction& f) {
  if (f.n == 0 || f.values.size() != f.n) {
    throw std::invalid_argument("grid function has inconsistent size");
  }
}

}  // namespace

GridFunction make_grid_function(std::size_t n,
                                const std::function<double(double)>& fn,
                                double length) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  if (!(length > 0.0)) throw std::invalid_argument("domain length must be positive");
  GridFunction f;
  f.n = n;
  f.length = length;
  f.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.values[i] = fn(f.midpoint(i));
  return f;
}

GridFunction ones_grid(std::size_t n, double length) {
  return make_grid_function(n, [](double) { return 1.0; }, length);
}

double inner_product(const GridFunction& f, const GridFunction& g) {
  check_nonempty(f);
  check_nonempty(g);
  check_same_grid(f, g);
  double s = 0.0;
  for (std::size_t i = 0; i < f.n; ++i) s += f.values[i] * g.values[i];
  return s * (f.length / static_cast<double>(f.n));
}

double norm(const GridFunction& f) { return std::sqrt(inner_product(f, f)); }

double integral(const GridFunction& f) {
  check_nonempty(f);
  double s = 0.0;
  for (double v : f.values) s += v;
  return s * (f.length / static_cast<double>(f.n));
}

GridFunction indicator(double a, double b, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  if (!(0.0 <= a && a < b && b <= 1.0)) {
    throw std::invalid_argument("indicator endpoints must satisfy 0 <= a < b <= 1");
  }
  GridFunction f;
  f.n = n;
  f.length = 1.0;
  f.values.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = static_cast<double>(i) / nd;
    const double hi = static_cast<double>(i + 1) / nd;
    const double overlap = std::max(0.0, std::min(b, hi) - std::max(a, lo));
    f.values[i] = overlap * nd;  // fraction of the cell covered
  }
  return f;
}

GridFunction embed_piecewise_constant(const Samples& samples, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  if (samples.u.size() != samples.y.size()) {
    throw std::invalid_argument("sample location/value count mismatch");
  }
  if (samples.u.empty()) throw std::invalid_argument("no data");

  std::vector<double> sum(n, 0.0);
  std::vector<std::size_t> count(n, 0);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k < samples.u.size(); ++k) {
    const double u = samples.u[k];
    if (!(u >= 0.0 && u <= 1.0)) {
      throw std::invalid_argument("sample location outside [0, 1]: " +
                                  std::to_string(u));
    }
    // Cell ceil(u * n), 1-based; u == 0 belongs to the first cell.
    std::size_t cell = static_cast<std::size_t>(std::ceil(u * nd));
    if (cell == 0) cell = 1;
    if (cell > n) cell = n;  // guards FP overshoot at u == 1
    sum[cell - 1] += samples.y[k];
    count[cell - 1] += 1;
  }

  GridFunction f;
  f.n = n;
  f.length = 1.0;
  f.values.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) f.values[i] = sum[i] / static_cast<double>(count[i]);
  }
  // Fill empty cells from the nearest occupied one, lower index on ties.
  for (std::size_t i = 0; i < n; ++i) {
    if (count[i] > 0) continue;
    std::size_t best = n;
    std::size_t best_dist = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < n; ++j) {
      if (count[j] == 0) continue;
      const std::size_t dist = (j > i) ? (j - i) : (i - j);
      if (dist < best_dist) {  // strict: keeps the lower index on ties
        best_dist = dist;
        best = j;
      }
    }
    f.values[i] = f.values[best];
  }
  return f;
}

namespace {

bool parse_field(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end == ' ' || *end == '\t') ++end;
  if (*end != '\0') return false;
  *out = v;
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Samples read_samples_csv(std::istream& in) {
  Samples out;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::size_t comma = t.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                  ": expected two comma-separated columns");
    }
    const std::string c0 = trim(t.substr(0, comma));
    const std::string c1 = trim(t.substr(comma + 1));
    if (c1.find(',') != std::string::npos) {
      throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                  ": expected exactly two columns");
    }
    double u = 0.0, y = 0.0;
    const bool ok = parse_field(c0, &u) && parse_field(c1, &y);
    if (!ok) {
      if (first_content_line) {  // header row
        first_content_line = false;
        continue;
      }
      throw std::invalid_argument("csv line " + std::to_string(line_no) +
                                  ": non-numeric field");
    }
    first_content_line = false;
    out.u.push_back(u);
    out.y.push_back(y);
  }
  if (out.u.empty()) throw std::invalid_argument("no data");
  return out;
}

Samples read_samples_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return read_samples_csv(in);
}

}  // namespace opgp
