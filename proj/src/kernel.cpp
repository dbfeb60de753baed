#include "setcast/kernel.hpp"

#include <cmath>
#include <sstream>

#include "setcast/error.hpp"
#include "setcast/keyvalue.hpp"

namespace setcast::svm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

KernelSpec KernelSpec::polynomial(int degree) {
  if (degree < 1) throw InvalidArgument("polynomial degree must be >= 1");
  return KernelSpec(PolynomialKernel{degree});
}

KernelSpec KernelSpec::rbf(double delta_sq) {
  if (!(delta_sq > 0.0) || !std::isfinite(delta_sq)) throw InvalidArgument("rbf delta_sq must be > 0");
  return KernelSpec(RbfKernel{delta_sq});
}

std::string KernelSpec::describe() const {
  return std::visit(overloaded{
                        [](LinearKernel) { return std::string("linear"); },
                        [](PolynomialKernel p) { return "poly(d=" + std::to_string(p.degree) + ")"; },
                        [](RbfKernel r) { return "rbf(delta_sq=" + format_real(r.delta_sq) + ")"; },
                    },
                    kind_);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double KernelSpec::operator()(std::span<const double> x, std::span<const double> y) const {
  return std::visit(overloaded{
                        [&](LinearKernel) { return dot(x, y); },
                        [&](PolynomialKernel p) { return std::pow(dot(x, y) + 1.0, p.degree); },
                        [&](RbfKernel r) {
                          double d2 = 0.0;
                          for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
                          return std::exp(-d2 / r.delta_sq);
                        },
                    },
                    kind_);
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw InvalidArgument("kernel dimension mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(y.size()));
  }
  return spec(x, y);
}

}  // namespace setcast::svm
