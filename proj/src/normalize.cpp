#include "rbfkit/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

NormalizeTransform::NormalizeTransform(Vector center, double half_extent)
    : center_(std::move(center)), half_extent_(half_extent) {
  if (center_.size() < 1 || center_.size() > 3) {
    throw InvalidInput("normalization center must have 1..3 components");
  }
  if (!center_.allFinite() || !(half_extent_ > 0.0) || !std::isfinite(half_extent_)) {
    throw InvalidInput("normalization transform must be finite with half_extent > 0");
  }
}

NormalizeTransform NormalizeTransform::identity(int dim) {
  return NormalizeTransform(Vector::Zero(dim), 1.0);
}

bool NormalizeTransform::is_identity() const {
  return half_extent_ == 1.0 && (center_.array() == 0.0).all();
}

void NormalizeTransform::apply_into(std::span<const double> p, std::span<double> out) const {
  if (p.size() != static_cast<std::size_t>(center_.size()) || out.size() != p.size()) {
    throw InvalidInput("normalize: dimension mismatch (point has " + std::to_string(p.size()) +
                       " components, transform " + std::to_string(center_.size()) + ")");
  }
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k] = (p[k] - center_[static_cast<Index>(k)]) / half_extent_;
  }
}

Vector NormalizeTransform::apply(std::span<const double> p) const {
  Vector out(static_cast<Index>(p.size()));
  apply_into(p, {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

Vector NormalizeTransform::invert(std::span<const double> p) const {
  if (p.size() != static_cast<std::size_t>(center_.size())) {
    throw InvalidInput("normalize: dimension mismatch");
  }
  Vector out(center_.size());
  for (Index k = 0; k < center_.size(); ++k) {
    out[k] = p[static_cast<std::size_t>(k)] * half_extent_ + center_[k];
  }
  return out;
}

PointCloud NormalizeTransform::apply(const PointCloud& cloud) const {
  Points mapped(cloud.size(), cloud.dim());
  const auto dim = static_cast<std::size_t>(cloud.dim());
  for (Index i = 0; i < cloud.size(); ++i) {
    apply_into(cloud.point(i), {mapped.data() + i * cloud.dim(), dim});
  }
  return PointCloud(std::move(mapped), cloud.values());
}

NormalizeTransform fit_transform(const PointCloud& cloud) {
  const Points& pts = cloud.points();
  Vector lo = pts.colwise().minCoeff().transpose();
  Vector hi = pts.colwise().maxCoeff().transpose();
  Vector center = lo + 0.5 * (hi - lo);
  // Measured from the rounded center so every mapped coordinate is within [-1, 1] exactly.
  double half_extent = 0.0;
  for (Index k = 0; k < center.size(); ++k) {
    half_extent = std::max({half_extent, hi[k] - center[k], center[k] - lo[k]});
  }
  if (!(half_extent > 0.0)) {
    half_extent = 1.0;
  }
  return NormalizeTransform(std::move(center), half_extent);
}

Kernel rescale_kernel(const Kernel& kernel, double half_extent) {
  switch (kernel.kind()) {
    case KernelKind::kMultiquadric:
      return Kernel(kernel.kind(), kernel.shape() / half_extent);
    case KernelKind::kThinPlateSpline:
      return kernel;
    default:
      return Kernel(kernel.kind(), kernel.shape() * half_extent);
  }
}

}  // namespace rbfkit
