#include "rbfkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

namespace {

void check_points(const Points& points) {
  if (points.cols() < 1 || points.cols() > 3) {
    throw InvalidInput("point dimension must be 1, 2 or 3, got " + std::to_string(points.cols()));
  }
  if (points.rows() < 1) {
    throw InvalidInput("point cloud must contain at least one site");
  }
  if (!points.allFinite()) {
    throw InvalidInput("point coordinates must be finite");
  }
}

}  // namespace

PointCloud::PointCloud(Points points, Vector values)
    : points_(std::move(points)), values_(std::move(values)) {
  check_points(points_);
  if (values_.size() != points_.rows()) {
    throw InvalidInput("point cloud has " + std::to_string(points_.rows()) + " sites but " +
                       std::to_string(values_.size()) + " values");
  }
  if (!values_.allFinite()) {
    throw InvalidInput("point values must be finite");
  }
}

PointCloud::PointCloud(Points points) : points_(std::move(points)) {
  check_points(points_);
  values_ = Vector::Zero(points_.rows());
}

double distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InvalidInput("distance: dimension mismatch (" + std::to_string(p.size()) + " vs " +
                       std::to_string(q.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::optional<std::pair<Index, Index>> find_duplicate(const Points& points) {
  std::map<std::vector<double>, Index> seen;
  for (Index i = 0; i < points.rows(); ++i) {
    std::vector<double> key(points.row(i).begin(), points.row(i).end());
    // -0.0 and 0.0 are the same site.
    for (double& v : key) v += 0.0;
    auto [it, inserted] = seen.emplace(std::move(key), i);
    if (!inserted) {
      return std::pair{it->second, i};
    }
  }
  return std::nullopt;
}

std::size_t RadiusIndex::CellKeyHash::operator()(const CellKey& k) const noexcept {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::int64_t c : k.c) {
    h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

RadiusIndex::RadiusIndex(const Points& points, double radius) : points_(&points), radius_(radius) {
  if (!(radius > 0.0)) {
    throw InvalidInput("radius must be > 0");
  }
  const Index n = points.rows();
  const int dim = static_cast<int>(points.cols());
  if (n < kBruteForceBelow || !std::isfinite(radius)) {
    return;
  }
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Zero();
  for (int k = 0; k < dim; ++k) {
    lo[k] = points.col(k).minCoeff();
    hi[k] = points.col(k).maxCoeff();
  }
  // Keep cell coordinates well inside int64 range.
  if (((hi - lo) / radius).maxCoeff() > 1e15) {
    return;
  }
  use_grid_ = true;
  origin_ = lo;
  for (Index i = 0; i < n; ++i) {
    cells_[cell_of({points.data() + i * dim, static_cast<std::size_t>(dim)})].push_back(i);
  }
}

RadiusIndex::CellKey RadiusIndex::cell_of(std::span<const double> p) const {
  CellKey key{{0, 0, 0}};
  for (std::size_t k = 0; k < p.size(); ++k) {
    key.c[k] = static_cast<std::int64_t>(std::floor((p[k] - origin_[k]) / radius_));
  }
  return key;
}

void RadiusIndex::scan(std::span<const Index> candidates, std::span<const double> p,
                       std::vector<Neighbor>& out) const {
  const auto dim = static_cast<std::size_t>(points_->cols());
  for (Index j : candidates) {
    const double d = distance(p, {points_->data() + j * points_->cols(), dim});
    if (d < radius_) {
      out.push_back({j, d});
    }
  }
}

std::vector<Neighbor> RadiusIndex::query(std::span<const double> p) const {
  if (p.size() != static_cast<std::size_t>(points_->cols())) {
    throw InvalidInput("radius query: dimension mismatch");
  }
  std::vector<Neighbor> out;
  if (!use_grid_) {
    const auto dim = static_cast<std::size_t>(points_->cols());
    for (Index j = 0; j < points_->rows(); ++j) {
      const double d = distance(p, {points_->data() + j * points_->cols(), dim});
      if (d < radius_) {
        out.push_back({j, d});
      }
    }
    return out;
  }
  const CellKey base = cell_of(p);
  const int dim = static_cast<int>(p.size());
  const int span_y = dim >= 2 ? 1 : 0;
  const int span_z = dim >= 3 ? 1 : 0;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -span_y; dy <= span_y; ++dy) {
      for (int dz = -span_z; dz <= span_z; ++dz) {
        const CellKey key{{base.c[0] + dx, base.c[1] + dy, base.c[2] + dz}};
        if (auto it = cells_.find(key); it != cells_.end()) {
          scan(it->second, p, out);
        }
      }
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  return out;
}

std::vector<Neighbor> radius_neighbors(const PointCloud& cloud, Index center_index,
                                       double radius) {
  if (center_index < 0 || center_index >= cloud.size()) {
    throw InvalidInput("radius_neighbors: center index " + std::to_string(center_index) +
                       " out of range [0, " + std::to_string(cloud.size()) + ")");
  }
  const RadiusIndex index(cloud.points(), radius);
  return index.query(cloud.point(center_index));
}

std::vector<std::vector<Neighbor>> all_radius_neighbors(const PointCloud& cloud, double radius) {
  const RadiusIndex index(cloud.points(), radius);
  std::vector<std::vector<Neighbor>> out(static_cast<std::size_t>(cloud.size()));
  for (Index i = 0; i < cloud.size(); ++i) {
    out[static_cast<std::size_t>(i)] = index.query(cloud.point(i));
  }
  return out;
}

}  // namespace rbfkit
