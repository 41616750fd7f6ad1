#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rbfkit {

using Index = Eigen::Index;
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// N sites in d dimensions (d in {1,2,3}) with one scalar value per site.
// Immutable once constructed.
class PointCloud {
 public:
  PointCloud(Points points, Vector values);

  // Sites without values (all zero); useful for geometry-only work.
  explicit PointCloud(Points points);

  int dim() const { return static_cast<int>(points_.cols()); }
  Index size() const { return points_.rows(); }
  const Points& points() const { return points_; }
  const Vector& values() const { return values_; }

  std::span<const double> point(Index i) const {
    return {points_.data() + i * points_.cols(), static_cast<std::size_t>(points_.cols())};
  }

 private:
  Points points_;
  Vector values_;
};

double distance(std::span<const double> p, std::span<const double> q);

// Returns the first pair (i < j) of bitwise-equal sites, if any.
std::optional<std::pair<Index, Index>> find_duplicate(const Points& points);

struct Neighbor {
  Index index;
  double distance;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Fixed-radius neighbor index over a set of sites. Uses a uniform hash grid
// with cell size equal to the radius; small sets fall back to a linear scan.
// Queries return sites with distance < radius in ascending index order.
class RadiusIndex {
 public:
  static constexpr Index kBruteForceBelow = 256;

  RadiusIndex(const Points& points, double radius);

  double radius() const { return radius_; }
  bool uses_grid() const { return use_grid_; }

  std::vector<Neighbor> query(std::span<const double> p) const;

 private:
  struct CellKey {
    std::int64_t c[3];
    friend bool operator==(const CellKey&, const CellKey&) = default;
  };
  struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const noexcept;
  };

  CellKey cell_of(std::span<const double> p) const;
  void scan(std::span<const Index> candidates, std::span<const double> p,
            std::vector<Neighbor>& out) const;

  const Points* points_;
  double radius_;
  bool use_grid_ = false;
  Eigen::Vector3d origin_ = Eigen::Vector3d::Zero();
  std::unordered_map<CellKey, std::vector<Index>, CellKeyHash> cells_;
};

std::vector<Neighbor> radius_neighbors(const PointCloud& cloud, Index center_index,
                                       double radius);

// Neighbor lists for every site, sharing one index.
std::vector<std::vector<Neighbor>> all_radius_neighbors(const PointCloud& cloud, double radius);

}  // namespace rbfkit
