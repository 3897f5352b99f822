// Benchmark of the OpenMP-parallel kernels against their serial reference
// implementations.  Each row reports wall time for both, the speedup, and the
// largest absolute difference between their outputs — required to be exactly
// zero (the parallel versions are bit-deterministic).
//
// Usage: opgp_bench [--quick]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "opgp/fredholm.hpp"
#include "opgp/gaussian.hpp"
#include "opgp/grid.hpp"
#include "opgp/kernels.hpp"
#include "opgp/likelihood.hpp"
#include "opgp/operators.hpp"
#include "opgp/rng.hpp"

using namespace opgp;
using Clock = std::chrono::steady_clock;

namespace {

volatile double g_sink = 0.0;

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
  double best = 1e30;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    fn();
    const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
    if (dt < best) best = dt;
  }
  return best;
}

void print_row(const std::string& name, const std::string& config,
               double t_serial, double t_parallel, double max_diff) {
  std::printf("%-24s %-26s %10.3f %10.3f %8.2fx   %g\n", name.c_str(),
              config.c_str(), t_serial * 1e3, t_parallel * 1e3,
              t_serial / t_parallel, max_diff);
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

void bench_kernel_matrix(bool quick) {
  const std::size_t n = quick ? 256 : 1024;
  const Kernel k = brownian_kernel(1.0);
  Eigen::MatrixXd par, ser;
  const double tp = time_best_of(3, [&] { par = kernel_matrix(k, n); });
  const double ts = time_best_of(3, [&] { ser = serial::kernel_matrix(k, n); });
  print_row("kernel_matrix", "min kernel, n=" + std::to_string(n), ts, tp,
            max_abs_diff(par, ser));
}

void bench_covariance_matrix(bool quick) {
  const std::size_t n = quick ? 48 : 160;
  const std::size_t n_quad = quick ? 512 : 2048;
  const OperatorSpec op = OperatorSpec::integral(forward_kernel(1.0));
  Eigen::MatrixXd par, ser;
  const double tp =
      time_best_of(3, [&] { par = covariance_matrix(op, n, n_quad); });
  const double ts = time_best_of(
      3, [&] { ser = serial::covariance_matrix(op, n, n_quad); });
  print_row("covariance_matrix",
            "running integral, n=" + std::to_string(n) + "/" +
                std::to_string(n_quad),
            ts, tp, max_abs_diff(par, ser));
}

void bench_white_noise(bool quick) {
  const std::size_t n = quick ? 1024 : 4096;
  const std::size_t reps = quick ? 500 : 2000;
  const std::vector<GridFunction> fs = {ones_grid(n), indicator(0.0, 0.5, n),
                                        indicator(0.25, 0.75, n)};
  std::vector<JointSample> par, ser;
  const double tp = time_best_of(3, [&] {
    NoiseStream stream{42, 0};
    par = sample_white_noise(fs, stream, reps);
  });
  const double ts = time_best_of(3, [&] {
    NoiseStream stream{42, 0};
    ser = serial::sample_white_noise(fs, stream, reps);
  });
  double diff = 0.0;
  for (std::size_t r = 0; r < reps; ++r) {
    for (std::size_t j = 0; j < fs.size(); ++j) {
      diff = std::max(diff,
                      std::abs(par[r].values[j] - ser[r].values[j]));
    }
  }
  print_row("sample_white_noise",
            "3 functionals, n=" + std::to_string(n) + ", reps=" +
                std::to_string(reps),
            ts, tp, diff);
}

void bench_series_det(bool quick) {
  const std::size_t grid_n = quick ? 32 : 48;
  const std::size_t k_max = 5;
  const Kernel k = brownian_kernel(1.0);
  DetResult par, ser;
  const double tp =
      time_best_of(3, [&] { par = fredholm_det_series(k, grid_n, k_max); });
  const double ts = time_best_of(
      3, [&] { ser = serial::fredholm_det_series(k, grid_n, k_max); });
  print_row("fredholm_det_series",
            "min kernel, grid=" + std::to_string(grid_n) + ", k_max=" +
                std::to_string(k_max),
            ts, tp, std::abs(par.det - ser.det));
}

void bench_volterra_ladder(bool quick) {
  std::printf("\nforward Volterra solve, ns per grid point (linear-time "
              "check):\n");
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const int max_pow = quick ? 12 : 16;
  for (int p = 10; p <= max_pow; ++p) {
    const std::size_t n = std::size_t{1} << p;
    GridFunction f;
    f.n = n;
    f.values.resize(n);
    for (double& v : f.values) v = unif(gen);
    const int iters = quick ? 50 : 200;
    const double t = time_best_of(3, [&] {
      for (int i = 0; i < iters; ++i) {
        const GridFunction g = volterra_solve(f, 1.0);
        g_sink = g_sink + g.values[n - 1];
      }
    });
    std::printf("  n=%-7zu %8.2f ns/point\n", n,
                t / static_cast<double>(iters) / static_cast<double>(n) * 1e9);
  }
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;
  }

  std::printf("%-24s %-26s %10s %10s %9s   %s\n", "kernel", "config",
              "serial ms", "openmp ms", "speedup", "max |diff|");
  bench_kernel_matrix(quick);
  bench_covariance_matrix(quick);
  bench_white_noise(quick);
  bench_series_det(quick);
  bench_volterra_ladder(quick);
  return 0;
}
