#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "opgp/grid.hpp"
#include "opgp/operators.hpp"
#include "opgp/rng.hpp"

namespace opgp {

/// One Monte Carlo draw of a Gaussian functional evaluated at k functionals.
struct JointSample {
  std::vector<double> values;
};

/// White noise W evaluated jointly at the given grid functions, by the basis
/// route: draw one iid N(0,1) variable per grid cell and set
/// W(f) = sum_i f_i X_i / sqrt(n) (the coordinate expansion of W in the
/// normalized indicator basis).  Joint draws share the X_i, so linear
/// identities between the f's hold exactly per draw.  Replicate r consumes
/// stream indices [counter + r*n, counter + (r+1)*n); the stream is advanced
/// past all of them.  All f's must share one grid.
std::vector<JointSample> sample_white_noise(std::span<const GridFunction> fs,
                                            NoiseStream& stream,
                                            std::size_t reps);

enum class SampleRoute { basis, gram };

/// The process X = W o O* evaluated jointly at the given functionals.
///
/// basis route: compute g_j = (adjoint O) f_j and evaluate white noise at the
/// g_j (replicate cost n draws).  gram route: form the Gram matrix
/// G_jk = <g_j, g_k>, Cholesky-factor it (with the PSD jitter ladder), and
/// return L z per replicate (cost k draws).  The two routes agree in
/// distribution; tests compare their empirical covariances.
std::vector<JointSample> sample_process(const OperatorSpec& o,
                                        std::span<const GridFunction> fs,
                                        NoiseStream& stream, std::size_t reps,
                                        SampleRoute route = SampleRoute::gram);

/// Interval [a, b] in [0, 1] for set-indexed noise.
struct Interval {
  double a = 0.0;
  double b = 0.0;
};

/// White noise evaluated at interval indicators: W(A) ~ N(0, |A|) jointly,
/// via the basis route on a grid_n-cell grid (so additivity over disjoint
/// unions is exact per draw).
std::vector<JointSample> sample_set_noise(std::span<const Interval> sets,
                                          NoiseStream& stream, std::size_t reps,
                                          std::size_t grid_n = 256);

/// Pointwise paths of the process defined by an integral-operator model:
/// covariance matrix at the grid midpoints (covariance_matrix), Cholesky with
/// the jitter ladder, then L z per replicate.
struct PathSample {
  std::vector<double> times;                ///< midpoints of [0, L]
  std::vector<std::vector<double>> paths;   ///< reps rows of n values
};
PathSample sample_path(const OperatorSpec& o, std::size_t n,
                       NoiseStream& stream, std::size_t reps,
                       std::size_t n_quad = 1024);

/// Draws y ~ N(0, cov) (one vector per replicate) via Cholesky of cov.
/// Replicate r consumes stream indices [counter + r*dim, ...).
std::vector<std::vector<double>> sample_gaussian_vector(
    const Eigen::MatrixXd& cov, NoiseStream& stream, std::size_t reps);

/// Unbiased sample covariance (divisor reps - 1) of joint draws.
/// Requires at least two replicates of equal dimension.
Eigen::MatrixXd empirical_cov(std::span<const JointSample> samples);

namespace serial {
/// Reference serial replicate loops (identical index bookkeeping, no
/// OpenMP); required to agree bit-for-bit with the parallel versions.
std::vector<JointSample> sample_white_noise(std::span<const GridFunction> fs,
                                            NoiseStream& stream,
                                            std::size_t reps);
std::vector<std::vector<double>> sample_gaussian_vector(
    const Eigen::MatrixXd& cov, NoiseStream& stream, std::size_t reps);
}  // namespace serial

}  // namespace opgp
