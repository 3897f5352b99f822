#include "opgp/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace opgp {

PointwiseFn const_fn(double c) {
  return PointwiseFn{"const(" + std::to_string(c) + ")",
                     [c](double) { return c; }};
}

OperatorSpec OperatorSpec::identity() {
  return OperatorSpec(std::make_shared<Node>(Node{Identity{}}));
}

OperatorSpec OperatorSpec::multiplication(PointwiseFn d) {
  if (!d.fn) throw std::invalid_argument("multiplication needs a callable");
  return OperatorSpec(std::make_shared<Node>(Node{Multiplication{std::move(d)}}));
}

OperatorSpec OperatorSpec::integral(Kernel k) {
  return OperatorSpec(std::make_shared<Node>(Node{Integral{std::move(k)}}));
}

OperatorSpec OperatorSpec::scaled(double c, const OperatorSpec& o) {
  return OperatorSpec(std::make_shared<Node>(Node{Scaled{c, o.ptr()}}));
}

OperatorSpec OperatorSpec::sum(const OperatorSpec& a, const OperatorSpec& b) {
  return OperatorSpec(std::make_shared<Node>(Node{Sum{a.ptr(), b.ptr()}}));
}

OperatorSpec OperatorSpec::compose(const OperatorSpec& a, const OperatorSpec& b) {
  return OperatorSpec(std::make_shared<Node>(Node{Compose{a.ptr(), b.ptr()}}));
}

OperatorSpec OperatorSpec::composite_dkd(PointwiseFn d, Kernel k) {
  if (!d.fn) throw std::invalid_argument("composite needs a callable multiplier");
  if (!k.symmetric()) {
    throw std::invalid_argument("composite D(I+K)D requires a symmetric kernel");
  }
  return OperatorSpec(
      std::make_shared<Node>(Node{CompositeDKD{std::move(d), std::move(k)}}));
}

OperatorSpec OperatorSpec::block2x2(const OperatorSpec& b11,
                                    const OperatorSpec& b12,
                                    const OperatorSpec& b21,
                                    const OperatorSpec& b22) {
  if (b11.is_block() || b12.is_block() || b21.is_block() || b22.is_block()) {
    throw std::invalid_argument("nested block operators are not supported");
  }
  return OperatorSpec(std::make_shared<Node>(
      Node{Block2x2{b11.ptr(), b12.ptr(), b21.ptr(), b22.ptr()}}));
}

OperatorSpec OperatorSpec::from_ptr(NodePtr p) {
  if (!p) throw std::invalid_argument("empty operator node");
  return OperatorSpec(std::move(p));
}

bool OperatorSpec::is_block() const {
  return std::holds_alternative<Block2x2>(node_->v);
}

namespace {

using Node = OperatorSpec::Node;
using NodePtr = OperatorSpec::NodePtr;

/// Walk kernels in the tree and agree on a domain length.
void collect_domain(const NodePtr& p, double* len, bool* seen) {
  const Node& n = *p;
  if (const auto* in = std::get_if<OperatorSpec::Integral>(&n.v)) {
    const double l = in->k.domain_length();
    if (*seen && l != *len) {
      throw std::invalid_argument("kernels in one operator disagree on domain");
    }
    *len = l;
    *seen = true;
  } else if (const auto* cd = std::get_if<OperatorSpec::CompositeDKD>(&n.v)) {
    const double l = cd->k.domain_length();
    if (*seen && l != *len) {
      throw std::invalid_argument("kernels in one operator disagree on domain");
    }
    *len = l;
    *seen = true;
  } else if (const auto* sc = std::get_if<OperatorSpec::Scaled>(&n.v)) {
    collect_domain(sc->sub, len, seen);
  } else if (const auto* su = std::get_if<OperatorSpec::Sum>(&n.v)) {
    collect_domain(su->lhs, len, seen);
    collect_domain(su->rhs, len, seen);
  } else if (const auto* co = std::get_if<OperatorSpec::Compose>(&n.v)) {
    collect_domain(co->lhs, len, seen);
    collect_domain(co->rhs, len, seen);
  } else if (const auto* bl = std::get_if<OperatorSpec::Block2x2>(&n.v)) {
    collect_domain(bl->b11, len, seen);
    collect_domain(bl->b12, len, seen);
    collect_domain(bl->b21, len, seen);
    collect_domain(bl->b22, len, seen);
  }
}

}  // namespace

double OperatorSpec::domain_length() const {
  double len = 1.0;
  bool seen = false;
  collect_domain(node_, &len, &seen);
  return len;
}

// ---------------------------------------------------------------------------
// adjoint / structural equality
// ---------------------------------------------------------------------------

namespace {

NodePtr adjoint_node(const NodePtr& p) {
  const Node& n = *p;
  if (std::holds_alternative<OperatorSpec::Identity>(n.v)) return p;
  if (std::holds_alternative<OperatorSpec::Multiplication>(n.v)) return p;
  if (const auto* in = std::get_if<OperatorSpec::Integral>(&n.v)) {
    if (in->k.symmetric()) return p;
    return std::make_shared<Node>(Node{OperatorSpec::Integral{in->k.transposed()}});
  }
  if (const auto* sc = std::get_if<OperatorSpec::Scaled>(&n.v)) {
    return std::make_shared<Node>(
        Node{OperatorSpec::Scaled{sc->c, adjoint_node(sc->sub)}});
  }
  if (const auto* su = std::get_if<OperatorSpec::Sum>(&n.v)) {
    return std::make_shared<Node>(
        Node{OperatorSpec::Sum{adjoint_node(su->lhs), adjoint_node(su->rhs)}});
  }
  if (const auto* co = std::get_if<OperatorSpec::Compose>(&n.v)) {
    // (A B)* = B* A*
    return std::make_shared<Node>(
        Node{OperatorSpec::Compose{adjoint_node(co->rhs), adjoint_node(co->lhs)}});
  }
  if (std::holds_alternative<OperatorSpec::CompositeDKD>(n.v)) {
    return p;  // D (I + K) D with symmetric K is self-adjoint
  }
  const auto& bl = std::get<OperatorSpec::Block2x2>(n.v);
  return std::make_shared<Node>(
      Node{OperatorSpec::Block2x2{adjoint_node(bl.b11), adjoint_node(bl.b21),
                                  adjoint_node(bl.b12), adjoint_node(bl.b22)}});
}

bool equal_nodes(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  const Node& x = *a;
  const Node& y = *b;
  if (x.v.index() != y.v.index()) return false;
  if (std::holds_alternative<OperatorSpec::Identity>(x.v)) return true;
  if (const auto* m = std::get_if<OperatorSpec::Multiplication>(&x.v)) {
    return m->d.name == std::get<OperatorSpec::Multiplication>(y.v).d.name;
  }
  if (const auto* in = std::get_if<OperatorSpec::Integral>(&x.v)) {
    return same_kernel(in->k, std::get<OperatorSpec::Integral>(y.v).k);
  }
  if (const auto* sc = std::get_if<OperatorSpec::Scaled>(&x.v)) {
    const auto& o = std::get<OperatorSpec::Scaled>(y.v);
    return sc->c == o.c && equal_nodes(sc->sub, o.sub);
  }
  if (const auto* su = std::get_if<OperatorSpec::Sum>(&x.v)) {
    const auto& o = std::get<OperatorSpec::Sum>(y.v);
    return equal_nodes(su->lhs, o.lhs) && equal_nodes(su->rhs, o.rhs);
  }
  if (const auto* co = std::get_if<OperatorSpec::Compose>(&x.v)) {
    const auto& o = std::get<OperatorSpec::Compose>(y.v);
    return equal_nodes(co->lhs, o.lhs) && equal_nodes(co->rhs, o.rhs);
  }
  if (const auto* cd = std::get_if<OperatorSpec::CompositeDKD>(&x.v)) {
    const auto& o = std::get<OperatorSpec::CompositeDKD>(y.v);
    return cd->d.name == o.d.name && same_kernel(cd->k, o.k);
  }
  const auto& bx = std::get<OperatorSpec::Block2x2>(x.v);
  const auto& by = std::get<OperatorSpec::Block2x2>(y.v);
  return equal_nodes(bx.b11, by.b11) && equal_nodes(bx.b12, by.b12) &&
         equal_nodes(bx.b21, by.b21) && equal_nodes(bx.b22, by.b22);
}

OperatorSpec from_node(const NodePtr& p);

}  // namespace

OperatorSpec adjoint(const OperatorSpec& o) { return from_node(adjoint_node(o.ptr())); }

bool structurally_equal(const OperatorSpec& a, const OperatorSpec& b) {
  return equal_nodes(a.ptr(), b.ptr());
}

// ---------------------------------------------------------------------------
// apply / matrix discretizations
// ---------------------------------------------------------------------------

namespace {

OperatorSpec from_node(const NodePtr& p) { return OperatorSpec::from_ptr(p); }

std::vector<double> apply_values(const NodePtr& p, const std::vector<double>& f,
                                 std::size_t n, double length);

/// Integral-node action: (L/n) sum_j w_ij K(m_i, m_j) f_j, with half weight
/// on the diagonal for triangular kernels (closed-edge convention).
std::vector<double> apply_integral(const Kernel& k, const std::vector<double>& f,
                                   std::size_t n, double length) {
  if (k.domain_length() != length) {
    throw std::invalid_argument("grid domain does not match kernel domain");
  }
  const double h = length / static_cast<double>(n);
  const bool tri = k.triangular();
  std::vector<double> out(n, 0.0);
  std::vector<double> m(n);
  for (std::size_t i = 0; i < n; ++i) m[i] = (static_cast<double>(i) + 0.5) * h;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double kij = k(m[i], m[j]);
      if (tri && i == j) kij *= 0.5;
      s += kij * f[j];
    }
    out[i] = s * h;
  }
  return out;
}

std::vector<double> apply_values(const NodePtr& p, const std::vector<double>& f,
                                 std::size_t n, double length) {
  const Node& node = *p;
  if (std::holds_alternative<OperatorSpec::Identity>(node.v)) return f;
  if (const auto* m = std::get_if<OperatorSpec::Multiplication>(&node.v)) {
    std::vector<double> out(n);
    const double h = length / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = m->d((static_cast<double>(i) + 0.5) * h) * f[i];
    }
    return out;
  }
  if (const auto* in = std::get_if<OperatorSpec::Integral>(&node.v)) {
    return apply_integral(in->k, f, n, length);
  }
  if (const auto* sc = std::get_if<OperatorSpec::Scaled>(&node.v)) {
    std::vector<double> out = apply_values(sc->sub, f, n, length);
    for (double& v : out) v *= sc->c;
    return out;
  }
  if (const auto* su = std::get_if<OperatorSpec::Sum>(&node.v)) {
    std::vector<double> a = apply_values(su->lhs, f, n, length);
    const std::vector<double> b = apply_values(su->rhs, f, n, length);
    for (std::size_t i = 0; i < n; ++i) a[i] += b[i];
    return a;
  }
  if (const auto* co = std::get_if<OperatorSpec::Compose>(&node.v)) {
    return apply_values(co->lhs, apply_values(co->rhs, f, n, length), n, length);
  }
  if (const auto* cd = std::get_if<OperatorSpec::CompositeDKD>(&node.v)) {
    const double h = length / static_cast<double>(n);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = cd->d((static_cast<double>(i) + 0.5) * h) * f[i];
    }
    std::vector<double> kg = apply_integral(cd->k, g, n, length);
    for (std::size_t i = 0; i < n; ++i) {
      kg[i] = cd->d((static_cast<double>(i) + 0.5) * h) * (g[i] + kg[i]);
    }
    return kg;
  }
  throw std::invalid_argument("block operator applied to a non-stacked function");
}

}  // namespace

GridFunction apply(const OperatorSpec& o, const GridFunction& f) {
  if (f.n == 0 || f.values.size() != f.n) {
    throw std::invalid_argument("grid function has inconsistent size");
  }
  GridFunction out = f;
  if (o.is_block()) {
    if (f.n % 2 != 0) {
      throw std::invalid_argument("block operator needs a stacked pair (even size)");
    }
    const std::size_t half = f.n / 2;
    const auto& bl = std::get<OperatorSpec::Block2x2>(o.node().v);
    const std::vector<double> f1(f.values.begin(), f.values.begin() + half);
    const std::vector<double> f2(f.values.begin() + half, f.values.end());
    std::vector<double> y1 = apply_values(bl.b11, f1, half, f.length);
    const std::vector<double> y12 = apply_values(bl.b12, f2, half, f.length);
    std::vector<double> y2 = apply_values(bl.b21, f1, half, f.length);
    const std::vector<double> y22 = apply_values(bl.b22, f2, half, f.length);
    for (std::size_t i = 0; i < half; ++i) {
      y1[i] += y12[i];
      y2[i] += y22[i];
    }
    std::copy(y1.begin(), y1.end(), out.values.begin());
    std::copy(y2.begin(), y2.end(), out.values.begin() + half);
    return out;
  }
  out.values = apply_values(o.ptr(), f.values, f.n, f.length);
  return out;
}

namespace {

Eigen::MatrixXd matrix_of(const NodePtr& p, std::size_t n, double length) {
  const Node& node = *p;
  const double h = length / static_cast<double>(n);
  auto mid = [h](std::size_t i) { return (static_cast<double>(i) + 0.5) * h; };
  if (std::holds_alternative<OperatorSpec::Identity>(node.v)) {
    return Eigen::MatrixXd::Identity(n, n);
  }
  if (const auto* m = std::get_if<OperatorSpec::Multiplication>(&node.v)) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = m->d(mid(i));
    return a;
  }
  if (const auto* in = std::get_if<OperatorSpec::Integral>(&node.v)) {
    if (in->k.domain_length() != length) {
      throw std::invalid_argument("grid domain does not match kernel domain");
    }
    const bool tri = in->k.triangular();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double kij = in->k(mid(i), mid(j));
        if (tri && i == j) kij *= 0.5;
        a(i, j) = kij * h;
      }
    }
    return a;
  }
  if (const auto* sc = std::get_if<OperatorSpec::Scaled>(&node.v)) {
    return sc->c * matrix_of(sc->sub, n, length);
  }
  if (const auto* su = std::get_if<OperatorSpec::Sum>(&node.v)) {
    return matrix_of(su->lhs, n, length) + matrix_of(su->rhs, n, length);
  }
  if (const auto* co = std::get_if<OperatorSpec::Compose>(&node.v)) {
    return matrix_of(co->lhs, n, length) * matrix_of(co->rhs, n, length);
  }
  if (const auto* cd = std::get_if<OperatorSpec::CompositeDKD>(&node.v)) {
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const double di = cd->d(mid(i));
      for (std::size_t j = 0; j < n; ++j) {
        const double r = cd->k(mid(i), mid(j)) * h + (i == j ? 1.0 : 0.0);
        a(i, j) = (di * r) * cd->d(mid(j));
      }
    }
    return a;
  }
  const auto& bl = std::get<OperatorSpec::Block2x2>(node.v);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topLeftCorner(n, n) = matrix_of(bl.b11, n, length);
  a.topRightCorner(n, n) = matrix_of(bl.b12, n, length);
  a.bottomLeftCorner(n, n) = matrix_of(bl.b21, n, length);
  a.bottomRightCorner(n, n) = matrix_of(bl.b22, n, length);
  return a;
}

}  // namespace

Eigen::MatrixXd matrix_approx(const OperatorSpec& o, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  return matrix_of(o.ptr(), n, o.domain_length());
}

FactoredMatrices matrix_factors(const OperatorSpec& composite, std::size_t n) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  const auto* cd = std::get_if<OperatorSpec::CompositeDKD>(&composite.node().v);
  if (cd == nullptr) {
    throw std::invalid_argument("matrix factors need a composite D(I+K)D node");
  }
  const double length = cd->k.domain_length();
  const double h = length / static_cast<double>(n);
  FactoredMatrices out;
  out.S_diag.resize(n);
  out.R.resize(n, n);
  out.M.resize(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out.S_diag(i) = cd->d((static_cast<double>(i) + 0.5) * h);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double mi = (static_cast<double>(i) + 0.5) * h;
    for (std::size_t j = 0; j < n; ++j) {
      const double mj = (static_cast<double>(j) + 0.5) * h;
      out.R(i, j) = cd->k(mi, mj) * h + (i == j ? 1.0 : 0.0);
    }
  }
  // Entrywise (S_i R_ij) S_j, the same association as the product (S R) S.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      out.M(i, j) = (out.S_diag(i) * out.R(i, j)) * out.S_diag(j);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// pointwise covariance
// ---------------------------------------------------------------------------

double pointwise_covariance(const OperatorSpec& o, double t1, double t2,
                            std::size_t n_quad) {
  if (n_quad == 0) throw std::invalid_argument("quadrature size must be positive");
  const auto* in = std::get_if<OperatorSpec::Integral>(&o.node().v);
  if (in == nullptr) {
    throw std::invalid_argument("no local continuity formula");
  }
  const Kernel& k = in->k;
  const double L = k.domain_length();
  if (!(t1 >= 0.0 && t1 <= L && t2 >= 0.0 && t2 <= L)) {
    throw std::invalid_argument("evaluation point outside the kernel domain");
  }
  double upper = L;
  if (k.shape() == Kernel::Shape::lower) {
    // The integrand K(t1, s) K(t2, s) vanishes for s beyond min(t1, t2).
    upper = std::min(t1, t2);
  } else if (k.shape() == Kernel::Shape::upper) {
    throw std::invalid_argument("no local continuity formula");
  }
  if (upper <= 0.0) return 0.0;
  const double h = upper / static_cast<double>(n_quad);
  double acc = 0.0;
  for (std::size_t j = 0; j < n_quad; ++j) {
    const double s = (static_cast<double>(j) + 0.5) * h;
    acc += k(t1, s) * k(t2, s);
  }
  return acc * h;
}

namespace {

Eigen::MatrixXd covariance_matrix_impl(const OperatorSpec& o, std::size_t n,
                                       std::size_t n_quad, bool parallel) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  const double L = o.domain_length();
  const double h = L / static_cast<double>(n);
  Eigen::MatrixXd c(n, n);
  const std::int64_t total = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    const std::size_t i = static_cast<std::size_t>(idx) / n;
    const std::size_t j = static_cast<std::size_t>(idx) % n;
    const double ti = (static_cast<double>(i) + 0.5) * h;
    const double tj = (static_cast<double>(j) + 0.5) * h;
    c(i, j) = pointwise_covariance(o, ti, tj, n_quad);
  }
  return c;
}

Eigen::MatrixXd kernel_matrix_impl(const Kernel& k, std::size_t n, bool parallel) {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  const double h = k.domain_length() / static_cast<double>(n);
  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    const double ti = (static_cast<double>(i) + 0.5) * h;
    for (std::size_t j = 0; j < n; ++j) {
      a(i, j) = k(ti, (static_cast<double>(j) + 0.5) * h);
    }
  }
  return a;
}

}  // namespace

Eigen::MatrixXd covariance_matrix(const OperatorSpec& o, std::size_t n,
                                  std::size_t n_quad) {
  return covariance_matrix_impl(o, n, n_quad, true);
}

Eigen::MatrixXd kernel_matrix(const Kernel& k, std::size_t n) {
  return kernel_matrix_impl(k, n, true);
}

namespace serial {

Eigen::MatrixXd covariance_matrix(const OperatorSpec& o, std::size_t n,
                                  std::size_t n_quad) {
  return covariance_matrix_impl(o, n, n_quad, false);
}

Eigen::MatrixXd kernel_matrix(const Kernel& k, std::size_t n) {
  return kernel_matrix_impl(k, n, false);
}

}  // namespace serial

// ---------------------------------------------------------------------------
// block covariance structure
// ---------------------------------------------------------------------------

OperatorSpec block_cross_covariance(const OperatorSpec& o) {
  const auto* bl = std::get_if<OperatorSpec::Block2x2>(&o.node().v);
  if (bl == nullptr) {
    throw std::invalid_argument("cross covariance needs a block2x2 operator");
  }
  const OperatorSpec b11 = from_node(bl->b11);
  const OperatorSpec b12 = from_node(bl->b12);
  const OperatorSpec b21 = from_node(bl->b21);
  const OperatorSpec b22 = from_node(bl->b22);
  // Cov(X1(f), X2(g)) = <B11* f, B21* g> + <B12* f, B22* g>
  //                   = <f, (B11 B21* + B12 B22*) g>.
  return OperatorSpec::sum(OperatorSpec::compose(b11, adjoint(b21)),
                           OperatorSpec::compose(b12, adjoint(b22)));
}

OperatorSpec block_component_variance(const OperatorSpec& o, int which) {
  const auto* bl = std::get_if<OperatorSpec::Block2x2>(&o.node().v);
  if (bl == nullptr) {
    throw std::invalid_argument("component variance needs a block2x2 operator");
  }
  if (which != 1 && which != 2) {
    throw std::invalid_argument("component index must be 1 or 2");
  }
  const OperatorSpec a = from_node(which == 1 ? bl->b11 : bl->b21);
  const OperatorSpec b = from_node(which == 1 ? bl->b12 : bl->b22);
  return OperatorSpec::sum(OperatorSpec::compose(a, adjoint(a)),
                           OperatorSpec::compose(b, adjoint(b)));
}

// ---------------------------------------------------------------------------
// truncated spectral square root of I + brownian-bridge kernel
// ---------------------------------------------------------------------------

SpectralOperator bb_noise_operator(std::size_t m) {
  if (m == 0) throw std::invalid_argument("truncation order must be positive");
  SpectralOperator op;
  op.eigenvalues.resize(m);
  for (std::size_t k = 1; k <= m; ++k) {
    const double kp = static_cast<double>(k) * std::numbers::pi;
    op.eigenvalues[k - 1] = std::sqrt(1.0 + 1.0 / (kp * kp));
  }
  return op;
}

double SpectralOperator::eigenvalue(std::size_t k) const {
  if (k == 0 || k > eigenvalues.size()) {
    throw std::invalid_argument("eigenvalue index out of range");
  }
  return eigenvalues[k - 1];
}

GridFunction SpectralOperator::apply(const GridFunction& f) const {
  if (f.n == 0 || f.values.size() != f.n) {
    throw std::invalid_argument("grid function has inconsistent size");
  }
  if (f.length != 1.0) {
    throw std::invalid_argument("spectral operator lives on the unit interval");
  }
  GridFunction out = f;
  std::fill(out.values.begin(), out.values.end(), 0.0);
  const double sqrt2 = std::numbers::sqrt2;
  for (std::size_t k = 1; k <= eigenvalues.size(); ++k) {
    GridFunction phi = make_grid_function(f.n, [k, sqrt2](double t) {
      return sqrt2 * std::sin(static_cast<double>(k) * std::numbers::pi * t);
    });
    const double c = inner_product(f, phi);
    const double lc = eigenvalues[k - 1] * c;
    for (std::size_t i = 0; i < f.n; ++i) out.values[i] += lc * phi.values[i];
  }
  return out;
}

Eigen::MatrixXd SpectralOperator::materialize(std::size_t n) const {
  if (n == 0) throw std::invalid_argument("grid size must be positive");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  const double sqrt2 = std::numbers::sqrt2;
  for (std::size_t k = 1; k <= eigenvalues.size(); ++k) {
    Eigen::VectorXd phi(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      phi(i) = sqrt2 * std::sin(static_cast<double>(k) * std::numbers::pi * t);
    }
    a += (eigenvalues[k - 1] / static_cast<double>(n)) * (phi * phi.transpose());
  }
  return a;
}

}  // namespace opgp
