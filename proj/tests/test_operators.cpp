#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "opgp/models.hpp"
#include "opgp/operators.hpp"
#include "test_util.hpp"

using namespace opgp;

namespace {

/// Stack two grid functions on the doubled grid used by block operators.
GridFunction stack_pair(const GridFunction& a, const GridFunction& b) {
  GridFunction out;
  out.n = 2 * a.n;
  out.length = a.length;
  out.values = a.values;
  out.values.insert(out.values.end(), b.values.begin(), b.values.end());
  return out;
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("identity application returns the input") {
  const GridFunction f = testutil::random_grid_function(16, 4);
  const GridFunction g = apply(OperatorSpec::identity(), f);
  for (std::size_t i = 0; i < f.n; ++i) CHECK(g.values[i] == f.values[i]);
}

TEST_CASE("constant-kernel application returns the scaled mean") {
  const GridFunction f = testutil::random_grid_function(32, 5);
  const GridFunction g = apply(OperatorSpec::integral(ones_kernel(1.0)), f);
  const double target = integral(f);
  for (double v : g.values) CHECK(v == doctest::Approx(target).epsilon(1e-13));
}

TEST_CASE("running-integral application on ones gives the midpoints") {
  const GridFunction f = ones_grid(4);
  const GridFunction g = apply(OperatorSpec::integral(forward_kernel(1.0)), f);
  // Half weight on the diagonal cell: value at midpoint m_i is m_i itself.
  CHECK(g.values[0] == doctest::Approx(1.0 / 8.0));
  CHECK(g.values[1] == doctest::Approx(3.0 / 8.0));
  CHECK(g.values[2] == doctest::Approx(5.0 / 8.0));
  CHECK(g.values[3] == doctest::Approx(7.0 / 8.0));
}

TEST_CASE("application is linear") {
  const OperatorSpec op = OperatorSpec::sum(
      OperatorSpec::scaled(0.5, OperatorSpec::integral(brownian_kernel(1.0))),
      OperatorSpec::compose(OperatorSpec::integral(forward_kernel(2.0)),
                            OperatorSpec::multiplication(const_fn(1.5))));
  const GridFunction f = testutil::random_grid_function(24, 6);
  const GridFunction g = testutil::random_grid_function(24, 7);
  const double a = -0.8;
  GridFunction comb = f;
  for (std::size_t i = 0; i < f.n; ++i) {
    comb.values[i] = a * f.values[i] + g.values[i];
  }
  const GridFunction lhs = apply(op, comb);
  const GridFunction of = apply(op, f);
  const GridFunction og = apply(op, g);
  for (std::size_t i = 0; i < f.n; ++i) {
    CHECK(lhs.values[i] ==
          doctest::Approx(a * of.values[i] + og.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("adjoint of a self-adjoint atom is the same node") {
  const OperatorSpec id = OperatorSpec::identity();
  CHECK(adjoint(id).ptr() == id.ptr());
  const OperatorSpec mult = OperatorSpec::multiplication(const_fn(2.0));
  CHECK(adjoint(mult).ptr() == mult.ptr());
  const OperatorSpec sym = OperatorSpec::integral(brownian_kernel(1.0));
  CHECK(adjoint(sym).ptr() == sym.ptr());
}

TEST_CASE("adjoint transposes kernels and reverses compositions") {
  const OperatorSpec fwd = OperatorSpec::integral(forward_kernel(1.0));
  const OperatorSpec fwd_adj = adjoint(fwd);
  CHECK_FALSE(structurally_equal(fwd, fwd_adj));
  CHECK(structurally_equal(adjoint(fwd_adj), fwd));

  const OperatorSpec comp =
      OperatorSpec::compose(fwd, OperatorSpec::multiplication(const_fn(3.0)));
  const OperatorSpec expect = OperatorSpec::compose(
      OperatorSpec::multiplication(const_fn(3.0)), fwd_adj);
  CHECK(structurally_equal(adjoint(comp), expect));
}

TEST_CASE("discrete adjoint identity holds for every node kind") {
  const GridFunction f = testutil::random_grid_function(48, 11);
  const GridFunction g = testutil::random_grid_function(48, 12);
  const OperatorSpec candidates[] = {
      OperatorSpec::identity(),
      OperatorSpec::multiplication(const_fn(1.3)),
      OperatorSpec::integral(forward_kernel(1.0)),
      OperatorSpec::integral(brownian_kernel(0.7)),
      OperatorSpec::scaled(-2.0, OperatorSpec::integral(forward_kernel(1.0))),
      OperatorSpec::sum(OperatorSpec::identity(),
                        OperatorSpec::integral(ones_kernel(0.5))),
      OperatorSpec::compose(OperatorSpec::integral(forward_kernel(1.0)),
                            OperatorSpec::multiplication(const_fn(0.5))),
      to_operator(mixed_model(1.5, 0.5)),
      to_operator(bm_noise_model(1.2, 0.8)),
  };
  for (const OperatorSpec& op : candidates) {
    const double lhs = inner_product(apply(op, f), g);
    const double rhs = inner_product(f, apply(adjoint(op), g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("discrete adjoint identity holds for block operators") {
  const GridFunction f = stack_pair(testutil::random_grid_function(16, 21),
                                    testutil::random_grid_function(16, 22));
  const GridFunction g = stack_pair(testutil::random_grid_function(16, 23),
                                    testutil::random_grid_function(16, 24));
  const OperatorSpec blk = OperatorSpec::block2x2(
      OperatorSpec::identity(), OperatorSpec::integral(forward_kernel(1.0)),
      OperatorSpec::scaled(0.5, OperatorSpec::identity()),
      OperatorSpec::integral(brownian_kernel(1.0)));
  const double lhs = inner_product(apply(blk, f), g);
  const double rhs = inner_product(f, apply(adjoint(blk), g));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("block application acts as a two-by-two matrix of operators") {
  const GridFunction f1 = testutil::random_grid_function(8, 31);
  const GridFunction f2 = testutil::random_grid_function(8, 32);
  const OperatorSpec blk = OperatorSpec::block2x2(
      OperatorSpec::identity(), OperatorSpec::scaled(2.0, OperatorSpec::identity()),
      OperatorSpec::scaled(0.0, OperatorSpec::identity()),
      OperatorSpec::identity());
  const GridFunction out = apply(blk, stack_pair(f1, f2));
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(out.values[i] ==
          doctest::Approx(f1.values[i] + 2.0 * f2.values[i]).epsilon(1e-14));
    CHECK(out.values[8 + i] == doctest::Approx(f2.values[i]).epsilon(1e-14));
  }
}

TEST_CASE("level-plus-noise model discretizes to the rank-one form") {
  const double alpha = 1.7, delta = 0.6;
  const std::size_t n = 5;
  const Eigen::MatrixXd m = matrix_approx(to_operator(mixed_model(alpha, delta)), n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double want =
          i == j ? alpha * (1.0 + delta / nd) : alpha * delta / nd;
      CHECK(m(i, j) == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("identity discretizes to the identity matrix") {
  const Eigen::MatrixXd m = matrix_approx(OperatorSpec::identity(), 6);
  CHECK((m - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("min-kernel factor matrix at two cells matches hand arithmetic") {
  const FactoredMatrices fac =
      matrix_factors(to_operator(bm_noise_model(1.0, 1.0)), 2);
  // R = I + (1/2) K at midpoints (1/4, 3/4), K = min.
  CHECK(fac.R(0, 0) == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(fac.R(0, 1) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(fac.R(1, 0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(fac.R(1, 1) == doctest::Approx(1.375).epsilon(1e-15));
}

TEST_CASE("factored matrices rebuild the direct discretization exactly") {
  for (const ModelParams& model :
       {mixed_model(2.0, 0.75), bm_noise_model(1.3, 0.9)}) {
    for (std::size_t n : {1u, 2u, 17u, 64u}) {
      const OperatorSpec op = to_operator(model);
      const FactoredMatrices fac = matrix_factors(op, n);
      const Eigen::MatrixXd direct = matrix_approx(op, n);
      CHECK((direct - fac.M).cwiseAbs().maxCoeff() == 0.0);
      const Eigen::MatrixXd srs =
          fac.S_diag.asDiagonal() * fac.R * fac.S_diag.asDiagonal();
      CHECK((srs - fac.M).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("factored matrices require the factored node kind") {
  CHECK_THROWS_AS(matrix_factors(OperatorSpec::identity(), 4),
                  std::invalid_argument);
}

TEST_CASE("pointwise covariance of the running integral is the min") {
  const OperatorSpec op = OperatorSpec::integral(forward_kernel(1.5));
  for (auto [t1, t2] : {std::pair{0.3, 0.7}, {0.9, 0.2}, {0.5, 0.5}}) {
    const double want = 1.5 * 1.5 * std::min(t1, t2);
    CHECK(pointwise_covariance(op, t1, t2) ==
          doctest::Approx(want).epsilon(5e-3));
  }
}

TEST_CASE("pointwise covariance is symmetric with nonnegative diagonal") {
  const OperatorSpec op = OperatorSpec::integral(forward_kernel(1.0));
  CHECK(pointwise_covariance(op, 0.3, 0.8) ==
        pointwise_covariance(op, 0.8, 0.3));
  CHECK(pointwise_covariance(op, 0.6, 0.6) >= 0.0);
}

TEST_CASE("pointwise covariance of the decay model is exponential in the lag") {
  const double alpha = 1.0, lambda = 1.0;
  const OperatorSpec op = to_operator(ou_model(alpha, lambda, 10.0));
  const double got = pointwise_covariance(op, 4.5, 5.5);
  const double want = alpha * alpha / (2.0 * lambda) * std::exp(-lambda * 1.0);
  CHECK(got == doctest::Approx(want).epsilon(1e-3));
}

TEST_CASE("pointwise covariance of the zero kernel vanishes") {
  const OperatorSpec op = OperatorSpec::integral(ones_kernel(0.0));
  CHECK(pointwise_covariance(op, 0.25, 0.75) == 0.0);
}

TEST_CASE("pointwise covariance refuses non-integral operators") {
  CHECK_THROWS_WITH_AS(
      pointwise_covariance(OperatorSpec::multiplication(const_fn(1.0)), 0.3,
                           0.5),
      "no local continuity formula", std::invalid_argument);
}

TEST_CASE("pointwise covariance against an independent quadrature oracle") {
  // Upper bound check via a fine independent midpoint rule for the
  // running-integral factor: cov(t1,t2) = integral of the overlap.
  const OperatorSpec op = OperatorSpec::integral(forward_kernel(1.0));
  const double t1 = 0.37, t2 = 0.81;
  const double oracle = testutil::midpoint_integral(
      [&](double s) { return (s <= t1 ? 1.0 : 0.0) * (s <= t2 ? 1.0 : 0.0); },
      0.0, 1.0, 40000);
  CHECK(pointwise_covariance(op, t1, t2, 4096) ==
        doctest::Approx(oracle).epsilon(1e-3));
}

TEST_CASE("covariance matrix assembly matches its serial reference bitwise") {
  const OperatorSpec op = OperatorSpec::integral(forward_kernel(1.0));
  const Eigen::MatrixXd par = covariance_matrix(op, 24, 256);
  const Eigen::MatrixXd ser = serial::covariance_matrix(op, 24, 256);
  CHECK((par - ser).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kernel table assembly matches its serial reference bitwise") {
  const Eigen::MatrixXd par = kernel_matrix(brownian_kernel(1.0), 48);
  const Eigen::MatrixXd ser = serial::kernel_matrix(brownian_kernel(1.0), 48);
  CHECK((par - ser).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross covariance of independent components is zero") {
  const OperatorSpec zero = OperatorSpec::scaled(0.0, OperatorSpec::identity());
  const OperatorSpec blk = OperatorSpec::block2x2(
      OperatorSpec::identity(), zero, zero,
      OperatorSpec::scaled(2.0, OperatorSpec::identity()));
  const Eigen::MatrixXd c = matrix_approx(block_cross_covariance(blk), 6);
  CHECK(c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cross covariance of fully shared noise is the identity") {
  const OperatorSpec zero = OperatorSpec::scaled(0.0, OperatorSpec::identity());
  // Both components read the same (second) noise coordinate.
  const OperatorSpec blk =
      OperatorSpec::block2x2(zero, OperatorSpec::identity(), zero,
                             OperatorSpec::identity());
  const Eigen::MatrixXd c = matrix_approx(block_cross_covariance(blk), 6);
  CHECK((c - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("cross covariance of all-identity blocks doubles the identity") {
  const OperatorSpec id = OperatorSpec::identity();
  const OperatorSpec blk = OperatorSpec::block2x2(id, id, id, id);
  const Eigen::MatrixXd c = matrix_approx(block_cross_covariance(blk), 5);
  CHECK((c - 2.0 * Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <=
        1e-14);
}

TEST_CASE("component variances come from the matching block row") {
  const OperatorSpec id = OperatorSpec::identity();
  const OperatorSpec zero = OperatorSpec::scaled(0.0, id);
  const OperatorSpec blk = OperatorSpec::block2x2(id, id, zero, id);
  const Eigen::MatrixXd v1 =
      matrix_approx(block_component_variance(blk, 1), 4);
  const Eigen::MatrixXd v2 =
      matrix_approx(block_component_variance(blk, 2), 4);
  CHECK((v1 - 2.0 * Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <=
        1e-14);
  CHECK((v2 - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("cross covariance rejects non-block operators") {
  CHECK_THROWS_AS(block_cross_covariance(OperatorSpec::identity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(block_component_variance(OperatorSpec::identity(), 1),
                  std::invalid_argument);
}

TEST_CASE("sine-basis noise operator has the stated spectrum") {
  const SpectralOperator r = bb_noise_operator(200);
  const double pi = std::numbers::pi;
  CHECK(r.eigenvalue(1) == doctest::Approx(std::sqrt(1.0 + 1.0 / (pi * pi)))
                               .epsilon(1e-15));
  // Eigenvalues decrease towards one: the operator stays boundedly away from
  // compact behavior.
  for (std::size_t k = 2; k <= 200; ++k) {
    CHECK(r.eigenvalue(k) < r.eigenvalue(k - 1));
    CHECK(r.eigenvalue(k) > 1.0);
  }
  CHECK(r.eigenvalue(200) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(r.eigenvalue(0), std::invalid_argument);
  CHECK_THROWS_AS(r.eigenvalue(201), std::invalid_argument);
}

TEST_CASE("squaring the sine-basis operator adds the bridge kernel") {
  const SpectralOperator r = bb_noise_operator(32);
  const std::size_t n = 256;
  const double pi = std::numbers::pi;
  for (std::size_t k : {1u, 2u, 5u}) {
    const GridFunction phi = make_grid_function(n, [&](double t) {
      return std::sqrt(2.0) * std::sin(static_cast<double>(k) * pi * t);
    });
    const GridFunction rr = r.apply(r.apply(phi));
    const double kd = static_cast<double>(k);
    const double want = 1.0 + 1.0 / (kd * kd * pi * pi);
    // Spectral route: R^2 phi_k = (1 + (k pi)^-2) phi_k.
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(rr.values[i] == doctest::Approx(want * phi.values[i])
                                .epsilon(1e-10));
    }
    // Kernel route: (I + bridge) phi_k reproduces the same function.
    const GridFunction bridge =
        apply(OperatorSpec::integral(brownian_bridge_kernel()), phi);
    for (std::size_t i = 0; i < n; i += 37) {
      CHECK(rr.values[i] == doctest::Approx(phi.values[i] + bridge.values[i])
                                .epsilon(5e-3));
    }
  }
}

TEST_CASE("spectral matrix form agrees with the spectral action") {
  const SpectralOperator r = bb_noise_operator(12);
  const std::size_t n = 64;
  const GridFunction f = testutil::random_grid_function(n, 77);
  const GridFunction via_apply = r.apply(f);
  const Eigen::MatrixXd mat = r.materialize(n);
  Eigen::VectorXd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = f.values[i];
  const Eigen::VectorXd out = mat * v;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(out(i) == doctest::Approx(via_apply.values[i]).epsilon(1e-10));
  }
}

TEST_CASE("operators report their domain length and reject mixtures") {
  CHECK(to_operator(ou_model(1.0, 1.0, 10.0)).domain_length() == 10.0);
  CHECK(OperatorSpec::identity().domain_length() == 1.0);
  const OperatorSpec mix = OperatorSpec::sum(
      OperatorSpec::integral(brownian_kernel(1.0)),
      OperatorSpec::integral(ou_kernel(1.0, 1.0, 10.0)));
  CHECK_THROWS_AS(mix.domain_length(), std::invalid_argument);
}

}  // TEST_SUITE
