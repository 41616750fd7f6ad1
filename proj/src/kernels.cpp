#include "rbfkit/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

Kernel::Kernel(KernelKind kind, double shape) : kind_(kind), shape_(shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidConfiguration("kernel shape parameter must be finite and > 0, got " +
                               fmt_real(shape));
  }
}

double Kernel::operator()(double r) const {
  switch (kind_) {
    case KernelKind::kThinPlateSpline:
      return r == 0.0 ? 0.0 : r * r * std::log(r);
    case KernelKind::kGaussian: {
      const double er = shape_ * r;
      return std::exp(-er * er);
    }
    case KernelKind::kMultiquadric:
      return std::hypot(r, shape_);
    case KernelKind::kWendlandC0:
    case KernelKind::kWendlandC2:
    case KernelKind::kWendlandC4: {
      const double t = shape_ * r;
      if (t >= 1.0) {
        return 0.0;
      }
      const double s = 1.0 - t;
      const double s2 = s * s;
      if (kind_ == KernelKind::kWendlandC0) {
        return s2;
      }
      const double s4 = s2 * s2;
      if (kind_ == KernelKind::kWendlandC2) {
        return s4 * (4.0 * t + 1.0);
      }
      return s4 * s2 * (35.0 * t * t + 18.0 * t + 3.0) / 3.0;
    }
  }
  return 0.0;
}

bool Kernel::is_compact() const {
  return kind_ == KernelKind::kWendlandC0 || kind_ == KernelKind::kWendlandC2 ||
         kind_ == KernelKind::kWendlandC4;
}

bool Kernel::is_positive_definite() const {
  return is_compact() || kind_ == KernelKind::kGaussian;
}

int Kernel::min_poly_degree() const {
  switch (kind_) {
    case KernelKind::kThinPlateSpline:
      return 1;
    case KernelKind::kMultiquadric:
      return 0;
    default:
      return -1;
  }
}

double Kernel::support_radius() const {
  return is_compact() ? 1.0 / shape_ : std::numeric_limits<double>::infinity();
}

double kernel_eval(const Kernel& kernel, double r) { return kernel(r); }

bool kernel_is_compact(const Kernel& kernel) { return kernel.is_compact(); }

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kThinPlateSpline:
      return "tps";
    case KernelKind::kGaussian:
      return "gaussian";
    case KernelKind::kMultiquadric:
      return "multiquadric";
    case KernelKind::kWendlandC0:
      return "wendland-c0";
    case KernelKind::kWendlandC2:
      return "wendland-c2";
    case KernelKind::kWendlandC4:
      return "wendland-c4";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "tps" || name == "thin-plate-spline") return KernelKind::kThinPlateSpline;
  if (name == "gaussian") return KernelKind::kGaussian;
  if (name == "multiquadric") return KernelKind::kMultiquadric;
  if (name == "wendland-c0") return KernelKind::kWendlandC0;
  if (name == "wendland-c2") return KernelKind::kWendlandC2;
  if (name == "wendland-c4") return KernelKind::kWendlandC4;
  throw InvalidConfiguration("unknown kernel '" + std::string(name) +
                             "' (expected tps|gaussian|multiquadric|wendland-c0|wendland-c2|"
                             "wendland-c4)");
}

}  // namespace rbfkit
