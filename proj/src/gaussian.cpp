#include "opgp/gaussian.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "opgp/linalg.hpp"

namespace opgp {

namespace {

void check_functionals(std::span<const GridFunction> fs) {
  if (fs.empty()) throw std::invalid_argument("need at least one functional");
  for (const GridFunction& f : fs) {
    if (f.n == 0 || f.values.size() != f.n) {
      throw std::invalid_argument("grid function has inconsistent size");
    }
    if (f.n != fs[0].n || f.length != fs[0].length) {
      throw std::invalid_argument("functionals must share one grid");
    }
  }
}

/// One white-noise replicate: draw the n cell coordinates from the stream
/// block starting at `base` and evaluate every functional on them.
/// W(f) = sqrt(h) * sum_i f_i X_i with h the cell measure, so that
/// Var W(f) = h * sum f_i^2 = ||f||^2.
JointSample white_noise_replicate(std::span<const GridFunction> fs,
                                  const NoiseStream& stream,
                                  std::uint64_t base, std::vector<double>& x) {
  const std::size_t n = fs[0].n;
  const double scale = std::sqrt(fs[0].length / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) x[i] = stream.normal_at(base + i);
  JointSample s;
  s.values.resize(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += fs[j].values[i] * x[i];
    s.values[j] = scale * acc;
  }
  return s;
}

std::vector<JointSample> sample_white_noise_impl(std::span<const GridFunction> fs,
                                                 NoiseStream& stream,
                                                 std::size_t reps,
                                                 bool parallel) {
  check_functionals(fs);
  const std::size_t n = fs[0].n;
  const std::uint64_t base = stream.counter;
  std::vector<JointSample> out(reps);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
    std::vector<double> x(n);
    out[r] = white_noise_replicate(
        fs, stream, base + static_cast<std::uint64_t>(r) * n, x);
  }
  stream.skip(static_cast<std::uint64_t>(reps) * n);
  return out;
}

std::vector<std::vector<double>> sample_gaussian_vector_impl(
    const Eigen::MatrixXd& cov, NoiseStream& stream, std::size_t reps,
    bool parallel) {
  const std::size_t dim = static_cast<std::size_t>(cov.rows());
  if (dim == 0) throw std::invalid_argument("empty covariance");
  const Eigen::MatrixXd L = cholesky_psd(cov).L;
  const std::uint64_t base = stream.counter;
  std::vector<std::vector<double>> out(reps);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
    Eigen::VectorXd z(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      z(i) = stream.normal_at(base + static_cast<std::uint64_t>(r) * dim + i);
    }
    const Eigen::VectorXd x = L * z;
    out[r].assign(x.data(), x.data() + dim);
  }
  stream.skip(static_cast<std::uint64_t>(reps) * dim);
  return out;
}

}  // namespace

std::vector<JointSample> sample_white_noise(std::span<const GridFunction> fs,
                                            NoiseStream& stream,
                                            std::size_t reps) {
  return sample_white_noise_impl(fs, stream, reps, true);
}

std::vector<JointSample> sample_process(const OperatorSpec& o,
                                        std::span<const GridFunction> fs,
                                        NoiseStream& stream, std::size_t reps,
                                        SampleRoute route) {
  check_functionals(fs);
  // X(f) = W((adjoint O) f): both routes start from the transported
  // functionals g_j.
  const OperatorSpec o_adj = adjoint(o);
  std::vector<GridFunction> gs;
  gs.reserve(fs.size());
  for (const GridFunction& f : fs) gs.push_back(apply(o_adj, f));

  if (route == SampleRoute::basis) {
    return sample_white_noise(gs, stream, reps);
  }

  const std::size_t k = gs.size();
  Eigen::MatrixXd gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      gram(i, j) = inner_product(gs[i], gs[j]);
    }
  }
  std::vector<std::vector<double>> draws =
      sample_gaussian_vector(gram, stream, reps);
  std::vector<JointSample> out(reps);
  for (std::size_t r = 0; r < reps; ++r) out[r].values = std::move(draws[r]);
  return out;
}

std::vector<JointSample> sample_set_noise(std::span<const Interval> sets,
                                          NoiseStream& stream, std::size_t reps,
                                          std::size_t grid_n) {
  if (sets.empty()) throw std::invalid_argument("need at least one set");
  std::vector<GridFunction> fs;
  fs.reserve(sets.size());
  for (const Interval& s : sets) fs.push_back(indicator(s.a, s.b, grid_n));
  return sample_white_noise(fs, stream, reps);
}

PathSample sample_path(const OperatorSpec& o, std::size_t n,
                       NoiseStream& stream, std::size_t reps,
                       std::size_t n_quad) {
  const Eigen::MatrixXd cov = covariance_matrix(o, n, n_quad);
  PathSample out;
  out.paths = sample_gaussian_vector(cov, stream, reps);
  const double L = o.domain_length();
  out.times.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.times[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n) * L;
  }
  return out;
}

std::vector<std::vector<double>> sample_gaussian_vector(
    const Eigen::MatrixXd& cov, NoiseStream& stream, std::size_t reps) {
  return sample_gaussian_vector_impl(cov, stream, reps, true);
}

Eigen::MatrixXd empirical_cov(std::span<const JointSample> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("empirical covariance needs at least two draws");
  }
  const std::size_t k = samples[0].values.size();
  for (const JointSample& s : samples) {
    if (s.values.size() != k) {
      throw std::invalid_argument("draws have mismatched dimensions");
    }
  }
  const double reps = static_cast<double>(samples.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(k);
  for (const JointSample& s : samples) {
    for (std::size_t j = 0; j < k; ++j) mean(j) += s.values[j];
  }
  mean /= reps;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(k, k);
  for (const JointSample& s : samples) {
    Eigen::VectorXd d(k);
    for (std::size_t j = 0; j < k; ++j) d(j) = s.values[j] - mean(j);
    cov += d * d.transpose();
  }
  cov /= (reps - 1.0);
  return cov;
}

namespace serial {

std::vector<JointSample> sample_white_noise(std::span<const GridFunction> fs,
                                            NoiseStream& stream,
                                            std::size_t reps) {
  return sample_white_noise_impl(fs, stream, reps, false);
}

std::vector<std::vector<double>> sample_gaussian_vector(
    const Eigen::MatrixXd& cov, NoiseStream& stream, std::size_t reps) {
  return sample_gaussian_vector_impl(cov, stream, reps, false);
}

}  // namespace serial

}  // namespace opgp
