#pragma once

#include <span>

#include "rbfkit/geometry.hpp"
#include "rbfkit/kernels.hpp"

namespace rbfkit {

// Isotropic centering and scaling that maps a cloud's bounding box into
// [-1, 1]^d: apply(p) = (p - center) / half_extent.
class NormalizeTransform {
 public:
  NormalizeTransform(Vector center, double half_extent);

  static NormalizeTransform identity(int dim);

  int dim() const { return static_cast<int>(center_.size()); }
  const Vector& center() const { return center_; }
  double half_extent() const { return half_extent_; }
  bool is_identity() const;

  Vector apply(std::span<const double> p) const;
  Vector invert(std::span<const double> p) const;

  void apply_into(std::span<const double> p, std::span<double> out) const;

  PointCloud apply(const PointCloud& cloud) const;

 private:
  Vector center_;
  double half_extent_;
};

NormalizeTransform fit_transform(const PointCloud& cloud);

// The kernel that, evaluated on transformed distances, reproduces the
// physical kernel up to a constant factor (which the interpolation weights
// absorb). Compact and gaussian shapes scale by half_extent, the multiquadric
// offset by 1 / half_extent; the thin plate spline is unchanged because the
// extra r^2 ln(h) term is annihilated by a degree >= 1 tail.
Kernel rescale_kernel(const Kernel& kernel, double half_extent);

}  // namespace rbfkit
