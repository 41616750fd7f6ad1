#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rbfkit/error.hpp"
#include "rbfkit/geometry.hpp"
#include "test_support.hpp"

using namespace rbfkit;
using rbfkit::testing::rows;
using rbfkit::testing::uniform_points;

namespace {

std::vector<Neighbor> brute_force(const Points& pts, Index center, double radius) {
  std::vector<Neighbor> out;
  for (Index j = 0; j < pts.rows(); ++j) {
    const double d = (pts.row(center) - pts.row(j)).norm();
    if (d < radius) out.push_back({j, d});
  }
  return out;
}

std::vector<Index> indices(const std::vector<Neighbor>& nbs) {
  std::vector<Index> out;
  for (const auto& nb : nbs) out.push_back(nb.index);
  return out;
}

}  // namespace

TEST_CASE("distance examples") {
  const double a[] = {0, 0}, b[] = {3, 4}, c[] = {1, 2};
  CHECK(distance(a, b) == 5.0);
  CHECK(distance(c, c) == 0.0);
  const double p[] = {1, 0, 0}, q[] = {0, 1, 0};
  CHECK(distance(p, q) == doctest::Approx(1.4142135623730950488).epsilon(1e-15));
  CHECK_THROWS_AS(distance(a, p), InvalidInput);
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  const Points pts = uniform_points(300, 3, 11, 10.0);
  for (Index i = 0; i + 2 < pts.rows(); i += 3) {
    auto row = [&](Index k) { return std::span<const double>(pts.data() + k * 3, 3); };
    const double ab = distance(row(i), row(i + 1));
    CHECK(ab == distance(row(i + 1), row(i)));
    CHECK(distance(row(i), row(i + 2)) <= ab + distance(row(i + 1), row(i + 2)) + 1e-12);
  }
}

TEST_CASE("point cloud validation") {
  CHECK_THROWS_AS(PointCloud(Points(0, 2)), InvalidInput);
  CHECK_THROWS_AS(PointCloud(Points::Zero(3, 4)), InvalidInput);
  CHECK_THROWS_AS(PointCloud(rows({{0, 0}, {1, 1}}), Vector::Zero(3)), InvalidInput);
  Points bad = rows({{0, 0}, {1, 1}});
  bad(1, 0) = std::nan("");
  CHECK_THROWS_AS(PointCloud{bad}, InvalidInput);
  Vector vals(2);
  vals << 1.0, std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(PointCloud(rows({{0, 0}, {1, 1}}), vals), InvalidInput);
}

TEST_CASE("radius_neighbors on a unit line") {
  const PointCloud line(rows({{0}, {1}, {2}, {3}}));
  const auto nbs = radius_neighbors(line, 1, 1.5);
  CHECK(indices(nbs) == std::vector<Index>{0, 1, 2});
  CHECK(nbs[1].distance == 0.0);
  CHECK(indices(radius_neighbors(line, 2, 0.5)) == std::vector<Index>{2});
  CHECK(indices(radius_neighbors(line, 0, 100.0)) == std::vector<Index>{0, 1, 2, 3});
  // Strict inequality: boundary-exact sites are excluded.
  CHECK(indices(radius_neighbors(line, 1, 1.0)) == std::vector<Index>{1});
  CHECK_THROWS_AS(radius_neighbors(line, 4, 1.0), InvalidInput);
  CHECK_THROWS_AS(radius_neighbors(line, -1, 1.0), InvalidInput);
  CHECK_THROWS_AS(radius_neighbors(line, 0, 0.0), InvalidInput);
}

TEST_CASE("grid index agrees exactly with a brute-force scan") {
  std::mt19937_64 rng(5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 3);
    const Index n = 300 + static_cast<Index>(rng() % 1700);
    const Points pts = uniform_points(n, dim, seed, 1.0 + static_cast<double>(seed % 7));
    const double radius = 0.02 + 0.3 * std::uniform_real_distribution<double>(0, 1)(rng);
    const RadiusIndex index(pts, radius);
    REQUIRE(index.uses_grid());
    for (int q = 0; q < 10; ++q) {
      const Index center = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
      const auto got = index.query({pts.data() + center * dim, static_cast<std::size_t>(dim)});
      CHECK(got == brute_force(pts, center, radius));
    }
  }
}

TEST_CASE("small clouds use the linear scan") {
  const Points pts = uniform_points(50, 2, 1);
  const RadiusIndex index(pts, 0.2);
  CHECK_FALSE(index.uses_grid());
  CHECK(index.query({pts.data(), 2}) == brute_force(pts, 0, 0.2));
}

TEST_CASE("all_radius_neighbors matches per-site queries") {
  const PointCloud cloud(uniform_points(400, 2, 3));
  const auto all = all_radius_neighbors(cloud, 0.1);
  for (Index i = 0; i < cloud.size(); i += 37) {
    CHECK(all[static_cast<std::size_t>(i)] == radius_neighbors(cloud, i, 0.1));
  }
}

TEST_CASE("duplicate detection") {
  CHECK_FALSE(find_duplicate(rows({{0, 0}, {1, 0}, {0, 1}})).has_value());
  const auto dup = find_duplicate(rows({{0, 0}, {1, 0}, {0, 1}, {1, 0}}));
  REQUIRE(dup.has_value());
  CHECK(dup->first == 1);
  CHECK(dup->second == 3);
  CHECK(find_duplicate(rows({{0.0}, {-0.0}})).has_value());
}
