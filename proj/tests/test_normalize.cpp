#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rbfkit/assembly.hpp"
#include "rbfkit/error.hpp"
#include "rbfkit/normalize.hpp"
#include "rbfkit/solve.hpp"
#include "test_support.hpp"

using namespace rbfkit;
using rbfkit::testing::rows;

TEST_CASE("fit_transform examples") {
  const auto t = fit_transform(PointCloud(rows({{0, 0}, {2, 0}, {0, 2}})));
  CHECK(t.center()[0] == 1.0);
  CHECK(t.center()[1] == 1.0);
  CHECK(t.half_extent() == 1.0);

  const auto id = fit_transform(PointCloud(rows({{-1, -1}, {1, 1}, {0.5, -0.2}})));
  CHECK(id.is_identity());

  const auto far = fit_transform(PointCloud(rows({{1e6, 1e6}, {1e6 + 2, 1e6}})));
  CHECK(far.center()[0] == 1e6 + 1);
  CHECK(far.center()[1] == 1e6);
  CHECK(far.half_extent() == 1.0);
}

TEST_CASE("degenerate extent uses half_extent 1") {
  CHECK(fit_transform(PointCloud(rows({{3, 4}}))).half_extent() == 1.0);
}

TEST_CASE("apply and invert") {
  const NormalizeTransform t(Vector::Ones(2), 1.0);
  const double p[] = {2, 0};
  const Vector q = t.apply(p);
  CHECK(q[0] == 1.0);
  CHECK(q[1] == -1.0);

  const auto id = NormalizeTransform::identity(3);
  const double r[] = {0.1, -7.0, 1e9};
  const Vector same = id.apply(r);
  CHECK(same[0] == r[0]);
  CHECK(same[1] == r[1]);
  CHECK(same[2] == r[2]);

  const double bad[] = {1.0};
  CHECK_THROWS_AS(t.apply(bad), InvalidInput);
  CHECK_THROWS_AS(t.invert(bad), InvalidInput);
  CHECK_THROWS_AS(NormalizeTransform(Vector::Zero(2), 0.0), InvalidInput);
}

TEST_CASE("invert after apply is the identity on random points") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  Vector c(3);
  c << 123.5, -8.25, 1e3;
  const NormalizeTransform t(c, 37.75);
  for (int i = 0; i < 1000; ++i) {
    const double p[] = {u(rng), u(rng), u(rng)};
    const Vector fwd = t.apply(p);
    const Vector back = t.invert(std::span<const double>(fwd.data(), fwd.size()));
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(back[k] - p[k]) <= 1e-12 * std::max(1.0, std::abs(p[k])));
    }
  }
}

TEST_CASE("transformed sites lie in [-1,1]^d") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 3);
    Points pts = rbfkit::testing::uniform_points(100, dim, seed, 1e3);
    pts.array() += 1e5 * static_cast<double>(seed);
    const PointCloud cloud(pts);
    const PointCloud mapped = fit_transform(cloud).apply(cloud);
    CHECK(mapped.points().cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("kernel rescaling keeps the physical support") {
  const Kernel w(KernelKind::kWendlandC2, 2.0);
  CHECK(rescale_kernel(w, 3.0).support_radius() * 3.0 == doctest::Approx(w.support_radius()));
  CHECK(rescale_kernel(Kernel(KernelKind::kGaussian, 2.0), 3.0).shape() == 6.0);
  CHECK(rescale_kernel(Kernel(KernelKind::kMultiquadric, 3.0), 3.0).shape() == 1.0);
  CHECK(rescale_kernel(Kernel(KernelKind::kThinPlateSpline, 1.0), 3.0).shape() == 1.0);
}

TEST_CASE("normalized and raw fits predict the same values near the origin") {
  const auto cloud = rbfkit::testing::random_cloud(60, 2, 4);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto kernel : {Kernel(KernelKind::kWendlandC2, 1.5), Kernel(KernelKind::kGaussian, 3.0),
                      Kernel(KernelKind::kThinPlateSpline, 1.0),
                      Kernel(KernelKind::kMultiquadric, 0.3)}) {
    const PolyBasis poly(1, 2);
    const auto raw = solve_direct(prepare_system(cloud, kernel, poly, {Storage::kDense, false}));
    const auto norm = solve_direct(prepare_system(cloud, kernel, poly, {Storage::kDense, true}));
    CHECK_FALSE(norm.transform().is_identity());
    for (int q = 0; q < 100; ++q) {
      const double x[] = {u(rng), u(rng)};
      const double a = raw.evaluate(x);
      const double b = norm.evaluate(x);
      CHECK(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(a)));
    }
  }
}
