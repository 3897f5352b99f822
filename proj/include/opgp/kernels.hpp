#pragma once

#include <functional>
#include <memory>
#include <string>

namespace opgp {

/// A named integral-operator kernel K(t, s) on [0, L]^2.
///
/// Triangular kernels carry a shape tag: a `lower` kernel vanishes for s > t
/// (it only looks into the past), an `upper` kernel for s < t.  On the
/// boundary s == t the evaluation callback defines the value as the limit from
/// the closed triangle; discretizations weight that edge by 1/2 so that the
/// transpose of a lower-triangular discretization is exactly the
/// discretization of the transposed (upper) kernel.
///
/// Kernel is a cheap value type: copies share the underlying callback, and
/// transposed() flips an argument-swap bit instead of wrapping the callback,
/// so transposing twice returns an object identical to the original.
class Kernel {
 public:
  enum class Shape { full, lower, upper };

  Kernel() = default;
  Kernel(std::string name, Shape shape, bool symmetric, double domain_length,
         std::function<double(double, double)> eval);

  /// Evaluate K(t, s) (arguments swapped internally if transposed).
  double operator()(double t, double s) const;

  const std::string& name() const;
  Shape shape() const;
  bool symmetric() const;
  bool triangular() const { return shape() != Shape::full; }
  /// Right end L of the square domain [0, L]^2 (1 unless stated otherwise).
  double domain_length() const;

  /// Kernel (t, s) -> K(s, t); swaps lower/upper shapes.  Symmetric kernels
  /// return an identical object.  Involutive: k.transposed().transposed()
  /// compares equal to k under same_kernel().
  Kernel transposed() const;

  /// Identity of the underlying kernel (shared callback + transposition bit).
  friend bool same_kernel(const Kernel& a, const Kernel& b) {
    return a.impl_ == b.impl_ && a.flipped_ == b.flipped_;
  }

 private:
  struct Impl {
    std::string name;
    Shape shape = Shape::full;
    bool symmetric = false;
    double domain_length = 1.0;
    std::function<double(double, double)> eval;
  };
  std::shared_ptr<const Impl> impl_;
  bool flipped_ = false;
};

/// Constant kernel K = c (rank-one variance direction <.,1>1 scaled by c).
Kernel ones_kernel(double c = 1.0);

/// Brownian-motion covariance kernel lambda^2 * min(t, s).
Kernel brownian_kernel(double lambda = 1.0);

/// Brownian-bridge covariance kernel min(t, s) - t*s.
Kernel brownian_bridge_kernel();

/// Lower-triangular constant kernel lambda * 1{s < t} (integrated-noise /
/// Brownian-path factor).
Kernel forward_kernel(double lambda = 1.0);

/// Lower-triangular Ornstein-Uhlenbeck factor alpha * exp(-lambda (t - s)),
/// s <= t, on [0, horizon]^2.  Requires lambda > 0.
Kernel ou_kernel(double alpha, double lambda, double horizon = 10.0);

/// Parse a registry spelling such as "ones", "ones(0.5)", "brownian",
/// "brownian(2)", "bb", "fwd(1.5)", "ou(1,1)" or "ou(1,1,10)".
/// Throws std::invalid_argument for unknown names or malformed arguments.
Kernel parse_kernel(const std::string& text);

}  // namespace opgp
