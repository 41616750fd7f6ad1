#pragma once

#include <string>
#include <string_view>

namespace rbfkit {

enum class KernelKind {
  kThinPlateSpline,
  kGaussian,
  kMultiquadric,
  kWendlandC0,
  kWendlandC2,
  kWendlandC4,
};

// A radial function phi(r) together with its shape parameter.
//
// Compact (Wendland) kernels are evaluated at t = shape * r, so their support
// radius in domain units is 1 / shape. The gaussian uses shape as epsilon in
// exp(-(eps r)^2), the multiquadric uses it as c in sqrt(r^2 + c^2). The thin
// plate spline r^2 ln r has no shape parameter; the stored value is ignored.
class Kernel {
 public:
  Kernel(KernelKind kind, double shape);

  KernelKind kind() const { return kind_; }
  double shape() const { return shape_; }

  double operator()(double r) const;

  bool is_compact() const;

  // Strictly positive definite kernels admit fits without a polynomial tail
  // and a Cholesky factorization of B.
  bool is_positive_definite() const;

  // Lowest polynomial tail degree for which the fit is well posed (-1: none).
  int min_poly_degree() const;

  // 1 / shape for compact kernels, +infinity otherwise.
  double support_radius() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  KernelKind kind_;
  double shape_;
};

double kernel_eval(const Kernel& kernel, double r);
bool kernel_is_compact(const Kernel& kernel);

// CLI / JSON spelling: tps | gaussian | multiquadric | wendland-c0 | wendland-c2 | wendland-c4.
std::string_view to_string(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

}  // namespace rbfkit
