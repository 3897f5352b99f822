#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "opgp/grid.hpp"
#include "opgp/kernels.hpp"

namespace opgp {

/// Named pointwise multiplier D(t) used by multiplication operators.
struct PointwiseFn {
  std::string name;
  std::function<double(double)> fn;
  double operator()(double t) const { return fn(t); }
};

/// Constant multiplier D(t) = c.
PointwiseFn const_fn(double c);

/// Immutable symbolic description of a bounded linear operator on L2.
///
/// An OperatorSpec is an expression tree over a small set of node kinds:
///   identity         f -> f
///   multiplication   f -> D * f
///   integral         f -> t -> int K(t, s) f(s) ds   (full or triangular K)
///   scaled           f -> c * (O f)
///   sum              f -> O1 f + O2 f
///   compose          f -> O1 (O2 f)
///   composite_dkd    f -> D (I + K) (D f)   (K symmetric; factored variance)
///   block2x2         2x2 operator matrix acting on pairs (f1, f2)
///
/// Nodes are shared immutably, so copies are cheap and adjoint() of a
/// self-adjoint atom returns the very same node; adjoint(adjoint(o)) is
/// structurally identical to o (see structurally_equal).
class OperatorSpec {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Identity {};
  struct Multiplication {
    PointwiseFn d;
  };
  struct Integral {
    Kernel k;
  };
  struct Scaled {
    double c;
    NodePtr sub;
  };
  struct Sum {
    NodePtr lhs, rhs;
  };
  struct Compose {
    NodePtr lhs, rhs;  ///< acts as lhs after rhs
  };
  struct CompositeDKD {
    PointwiseFn d;
    Kernel k;  ///< must be symmetric
  };
  struct Block2x2 {
    NodePtr b11, b12, b21, b22;
  };

  struct Node {
    std::variant<Identity, Multiplication, Integral, Scaled, Sum, Compose,
                 CompositeDKD, Block2x2>
        v;
  };

  OperatorSpec() : OperatorSpec(identity()) {}

  static OperatorSpec identity();
  static OperatorSpec multiplication(PointwiseFn d);
  /// Integral operator with a full or triangular kernel.
  static OperatorSpec integral(Kernel k);
  static OperatorSpec scaled(double c, const OperatorSpec& o);
  static OperatorSpec sum(const OperatorSpec& a, const OperatorSpec& b);
  /// Composition a(b(f)).
  static OperatorSpec compose(const OperatorSpec& a, const OperatorSpec& b);
  /// Factored form D (I + K) D; throws std::invalid_argument if the kernel is
  /// not symmetric.
  static OperatorSpec composite_dkd(PointwiseFn d, Kernel k);
  static OperatorSpec block2x2(const OperatorSpec& b11, const OperatorSpec& b12,
                               const OperatorSpec& b21,
                               const OperatorSpec& b22);
  /// Wrap an existing shared node (used by structural transforms such as
  /// adjoint, which return the very same node for self-adjoint atoms).
  static OperatorSpec from_ptr(NodePtr p);

  const Node& node() const { return *node_; }
  const NodePtr& ptr() const { return node_; }
  bool is_block() const;

  /// Right end of the operator's domain (from its kernels; 1 by default).
  /// Throws std::invalid_argument if kernels in the tree disagree.
  double domain_length() const;

 private:
  explicit OperatorSpec(NodePtr p) : node_(std::move(p)) {}
  NodePtr node_;
};

/// Adjoint as a structural transform: kernels are transposed, compositions
/// reversed, blocks transposed; self-adjoint atoms are returned unchanged.
OperatorSpec adjoint(const OperatorSpec& o);

/// Structural equality of operator trees (kernels compared by identity via
/// same_kernel, multipliers by name, scalars exactly).
bool structurally_equal(const OperatorSpec& a, const OperatorSpec& b);

/// Apply the operator to a grid function via midpoint quadrature:
/// integral nodes map f to (1/n) sum_j w_ij K(m_i, m_j) f_j with w_ij = 1,
/// except w_ii = 1/2 for triangular kernels (half weight on the diagonal
/// edge, consistent with the closed-triangle limit convention).
/// Block operators act on stacked pairs: f must have even size 2n.
/// Throws std::invalid_argument on grid/domain mismatch.
GridFunction apply(const OperatorSpec& o, const GridFunction& f);

/// Dense n-by-n midpoint discretization of the operator (2n-by-2n for block
/// operators); the matrix whose action on value vectors matches apply().
Eigen::MatrixXd matrix_approx(const OperatorSpec& o, std::size_t n);

/// Factored discretization of a composite_dkd node: S = diag(D(m_i)),
/// R = I + (1/n) K(m_i, m_j), and M assembled entrywise as (S_i R_ij) S_j,
/// which is bit-identical to the matrix product (S R) S.
/// Throws std::invalid_argument for any other node kind.
struct FactoredMatrices {
  Eigen::MatrixXd M;
  Eigen::MatrixXd R;
  Eigen::VectorXd S_diag;
};
FactoredMatrices matrix_factors(const OperatorSpec& composite, std::size_t n);

/// Pointwise process covariance for an integral-operator model O:
/// Cov(X(t1), X(t2)) = int K(t1, s) K(t2, s) ds, integrated by midpoint rule
/// over [0, L] (full kernels) or [0, min(t1, t2)] (lower-triangular kernels,
/// where the integrand vanishes beyond the minimum).  Throws
/// std::invalid_argument for other node kinds or points outside the domain.
double pointwise_covariance(const OperatorSpec& o, double t1, double t2,
                            std::size_t n_quad = 1024);

/// n-by-n matrix of pointwise_covariance at all midpoint pairs of [0, L].
/// Parallelized over entries; serial::covariance_matrix is the reference.
Eigen::MatrixXd covariance_matrix(const OperatorSpec& o, std::size_t n,
                                  std::size_t n_quad = 1024);

/// Dense kernel evaluation table K(m_i, m_j) (no 1/n factor, no triangular
/// half-weighting); building block shared by the determinant routes.
Eigen::MatrixXd kernel_matrix(const Kernel& k, std::size_t n);

/// Cross-covariance operator of the two components of a block2x2 model:
/// Cov(X1(f), X2(g)) = <f, C g> with C = B11 B21* + B12 B22*.
/// Throws std::invalid_argument if o is not a block2x2 node.
OperatorSpec block_cross_covariance(const OperatorSpec& o);

/// Variance operator of one component (which = 1 or 2) of a block2x2 model:
/// B11 B11* + B12 B12* resp. B21 B21* + B22 B22*.
OperatorSpec block_component_variance(const OperatorSpec& o, int which);

/// Truncated spectral square root of I + K_bb (K_bb the Brownian-bridge
/// kernel): eigenfunctions sqrt(2) sin(k pi t), eigenvalues
/// sqrt(1 + (k pi)^-2), k = 1..m.
struct SpectralOperator {
  std::vector<double> eigenvalues;

  /// 1-based eigenvalue accessor; throws std::invalid_argument out of range.
  double eigenvalue(std::size_t k) const;
  /// Spectral action restricted to the truncated span:
  /// f -> sum_k lambda_k <f, phi_k> phi_k.
  GridFunction apply(const GridFunction& f) const;
  /// Dense n-by-n matrix with the same truncated action.
  Eigen::MatrixXd materialize(std::size_t n) const;
};
SpectralOperator bb_noise_operator(std::size_t m);

namespace serial {
/// Reference implementations of the parallel assembly kernels; the parallel
/// versions are required to produce bit-identical results.
Eigen::MatrixXd covariance_matrix(const OperatorSpec& o, std::size_t n,
                                  std::size_t n_quad = 1024);
Eigen::MatrixXd kernel_matrix(const Kernel& k, std::size_t n);
}  // namespace serial

}  // namespace opgp
