#include "opgp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

namespace opgp {

Kernel::Kernel(std::string name, Shape shape, bool symmetric,
               double domain_length, std::function<double(double, double)> eval)
    : impl_(std::make_shared<Impl>(Impl{std::move(name), shape, symmetric,
                                        domain_length, std::move(eval)})) {}

double Kernel::operator()(double t, double s) const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  return flipped_ ? impl_->eval(s, t) : impl_->eval(t, s);
}

const std::string& Kernel::name() const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  return impl_->name;
}

Kernel::Shape Kernel::shape() const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  if (!flipped_) return impl_->shape;
  switch (impl_->shape) {
    case Shape::lower:
      return Shape::upper;
    case Shape::upper:
      return Shape::lower;
    default:
      return Shape::full;
  }
}

bool Kernel::symmetric() const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  return impl_->symmetric;
}

double Kernel::domain_length() const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  return impl_->domain_length;
}

Kernel Kernel::transposed() const {
  if (!impl_) throw std::invalid_argument("empty kernel");
  if (impl_->symmetric) return *this;
  Kernel k = *this;
  k.flipped_ = !flipped_;
  return k;
}

Kernel ones_kernel(double c) {
  return Kernel("ones", Kernel::Shape::full, true, 1.0,
                [c](double, double) { return c; });
}

Kernel brownian_kernel(double lambda) {
  const double l2 = lambda * lambda;
  return Kernel("brownian", Kernel::Shape::full, true, 1.0,
                [l2](double t, double s) { return l2 * std::min(t, s); });
}

Kernel brownian_bridge_kernel() {
  return Kernel("bb", Kernel::Shape::full, true, 1.0,
                [](double t, double s) { return std::min(t, s) - t * s; });
}

Kernel forward_kernel(double lambda) {
  // Closed-triangle convention: the value at s == t is the limit lambda.
  return Kernel("fwd", Kernel::Shape::lower, false, 1.0,
                [lambda](double t, double s) { return s <= t ? lambda : 0.0; });
}

Kernel ou_kernel(double alpha, double lambda, double horizon) {
  if (!(lambda > 0.0)) throw std::invalid_argument("ou kernel needs lambda > 0");
  if (!(horizon > 0.0)) throw std::invalid_argument("ou kernel needs horizon > 0");
  return Kernel("ou", Kernel::Shape::lower, false, horizon,
                [alpha, lambda](double t, double s) {
                  return s <= t ? alpha * std::exp(-lambda * (t - s)) : 0.0;
                });
}

namespace {

std::string strip(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_args(const std::string& text, const std::string& name) {
  std::vector<double> args;
  std::string rest = text;
  while (!rest.empty()) {
    std::size_t comma = rest.find(',');
    std::string piece = strip(comma == std::string::npos ? rest : rest.substr(0, comma));
    rest = comma == std::string::npos ? "" : rest.substr(comma + 1);
    const char* begin = piece.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw std::invalid_argument("malformed argument for kernel '" + name +
                                  "': '" + piece + "'");
    }
    args.push_back(v);
  }
  return args;
}

}  // namespace

Kernel parse_kernel(const std::string& text) {
  const std::string t = strip(text);
  std::string name = t;
  std::vector<double> args;
  const std::size_t open = t.find('(');
  if (open != std::string::npos) {
    if (t.back() != ')') {
      throw std::invalid_argument("malformed kernel spelling: '" + text + "'");
    }
    name = strip(t.substr(0, open));
    args = parse_args(t.substr(open + 1, t.size() - open - 2), name);
  }

  auto want = [&](std::size_t lo, std::size_t hi) {
    if (args.size() < lo || args.size() > hi) {
      throw std::invalid_argument("kernel '" + name + "' takes " +
                                  std::to_string(lo) +
                                  (hi == lo ? "" : (".." + std::to_string(hi))) +
                                  " argument(s)");
    }
  };

  if (name == "ones") {
    want(0, 1);
    return ones_kernel(args.empty() ? 1.0 : args[0]);
  }
  if (name == "brownian") {
    want(0, 1);
    return brownian_kernel(args.empty() ? 1.0 : args[0]);
  }
  if (name == "bb") {
    want(0, 0);
    return brownian_bridge_kernel();
  }
  if (name == "fwd") {
    want(0, 1);
    return forward_kernel(args.empty() ? 1.0 : args[0]);
  }
  if (name == "ou") {
    want(2, 3);
    return ou_kernel(args[0], args[1], args.size() == 3 ? args[2] : 10.0);
  }
  throw std::invalid_argument("unknown kernel: '" + name + "'");
}

}  // namespace opgp
