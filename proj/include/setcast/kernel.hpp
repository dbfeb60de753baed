#pragma once

#include <span>
#include <string>
#include <variant>

namespace setcast::svm {

struct LinearKernel {};

/// (x.y + 1)^degree
struct PolynomialKernel {
  int degree = 1;
};

/// exp(-|x - y|^2 / delta_sq)
struct RbfKernel {
  double delta_sq = 1.0;
};

class KernelSpec {
 public:
  using Variant = std::variant<LinearKernel, PolynomialKernel, RbfKernel>;

  KernelSpec() = default;

  static KernelSpec linear() { return KernelSpec(LinearKernel{}); }
  static KernelSpec polynomial(int degree);
  static KernelSpec rbf(double delta_sq);

  const Variant& variant() const noexcept { return kind_; }
  bool is_linear() const noexcept { return std::holds_alternative<LinearKernel>(kind_); }

  /// "linear", "poly(d=2)", "rbf(delta_sq=0.5)"
  std::string describe() const;

  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  explicit KernelSpec(Variant v) : kind_(v) {}
  Variant kind_ = LinearKernel{};
};

double dot(std::span<const double> x, std::span<const double> y);

/// Throws InvalidArgument on a dimension mismatch.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

}  // namespace setcast::svm
