#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "rbfkit/assembly.hpp"
#include "rbfkit/error.hpp"
#include "rbfkit/solve.hpp"
#include "test_support.hpp"

using namespace rbfkit;
using rbfkit::testing::random_cloud;
using rbfkit::testing::rows;

TEST_CASE("poly basis sizes and ordering") {
  CHECK(PolyBasis::none(2).size() == 0);
  CHECK(PolyBasis(0, 3).size() == 1);
  CHECK(PolyBasis(1, 2).size() == 3);
  CHECK(PolyBasis(2, 2).size() == 6);
  CHECK(PolyBasis(1, 3).size() == 4);
  CHECK(PolyBasis(2, 3).size() == 10);
  CHECK(PolyBasis(2, 1).size() == 3);
  CHECK(PolyBasis(2, 2).names() == std::vector<std::string>{"1", "x", "y", "x^2", "xy", "y^2"});
  CHECK(PolyBasis(2, 3).names() ==
        std::vector<std::string>{"1", "x", "y", "z", "x^2", "xy", "xz", "y^2", "yz", "z^2"});
  CHECK_THROWS_AS(PolyBasis(3, 2), InvalidConfiguration);
  CHECK_THROWS_AS(PolyBasis(1, 4), InvalidConfiguration);
}

TEST_CASE("tail rows reproduce known polynomials") {
  // P_2(x) = a0 + a1 x + a2 y + a3 x^2 + a4 xy + a5 y^2
  const double a[] = {0.5, -1.0, 2.0, 3.0, -0.25, 1.5};
  const PolyBasis poly(2, 2);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng), y = u(rng);
    const double pt[] = {x, y};
    double mono[6];
    poly.evaluate(pt, mono);
    double got = 0.0;
    for (int k = 0; k < 6; ++k) got += a[k] * mono[k];
    const double want = a[0] + a[1] * x + a[2] * y + a[3] * x * x + a[4] * x * y + a[5] * y * y;
    CHECK(got == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("single site system") {
  Vector h(1);
  h << 5.0;
  const auto sys = assemble_dense(PointCloud(rows({{0.3, 0.7}}), h),
                                  Kernel(KernelKind::kWendlandC2, 1.0), PolyBasis::none(2));
  CHECK(sys.full_matrix().rows() == 1);
  CHECK(sys.full_matrix()(0, 0) == 1.0);
  CHECK(sys.rhs[0] == 5.0);
}

TEST_CASE("three sites with a linear tail give the 6x6 block layout") {
  Vector h(3);
  h << 1, 2, 3;
  const PointCloud cloud(rows({{0, 0}, {0.5, 0}, {0, 0.25}}), h);
  const Kernel k(KernelKind::kWendlandC2, 1.0);
  const auto sys = assemble_dense(cloud, k, PolyBasis(1, 2));
  const Matrix m = sys.full_matrix();
  REQUIRE(m.rows() == 6);
  for (Index i = 0; i < 3; ++i) {
    for (Index j = 0; j < 3; ++j) {
      CHECK(m(i, j) == k(distance(cloud.point(i), cloud.point(j))));
    }
    CHECK(m(i, 3) == 1.0);
    CHECK(m(i, 4) == cloud.points()(i, 0));
    CHECK(m(i, 5) == cloud.points()(i, 1));
    CHECK(m(3, i) == 1.0);
    CHECK(m(4, i) == cloud.points()(i, 0));
    CHECK(m(5, i) == cloud.points()(i, 1));
  }
  CHECK(m.bottomRightCorner(3, 3).isZero(0.0));
  CHECK(sys.rhs.tail(3).isZero(0.0));
  CHECK(sys.rhs.head(3) == h);
}

TEST_CASE("sites beyond the support give B = phi(0) I") {
  const auto sys = assemble_dense(PointCloud(rows({{0, 0}, {3, 0}})),
                                  Kernel(KernelKind::kWendlandC2, 1.0), PolyBasis::none(2));
  CHECK(sys.dense_b == Matrix::Identity(2, 2));
}

TEST_CASE("duplicate sites are a degenerate input") {
  const PointCloud dup(rows({{0, 0}, {1, 0}, {0, 0}}));
  CHECK_THROWS_AS(assemble_dense(dup, Kernel(KernelKind::kGaussian, 1.0), PolyBasis(1, 2)),
                  DegenerateInput);
  CHECK_THROWS_AS(assemble_sparse(dup, Kernel(KernelKind::kWendlandC2, 1.0), PolyBasis(1, 2)),
                  DegenerateInput);
}

TEST_CASE("kernel and tail compatibility") {
  const PointCloud c(rows({{0, 0}, {1, 0}, {0, 1}}));
  CHECK_THROWS_AS(assemble_dense(c, Kernel(KernelKind::kThinPlateSpline, 1.0), PolyBasis(0, 2)),
                  InvalidConfiguration);
  CHECK_THROWS_AS(assemble_dense(c, Kernel(KernelKind::kMultiquadric, 1.0), PolyBasis::none(2)),
                  InvalidConfiguration);
  CHECK_NOTHROW(assemble_dense(c, Kernel(KernelKind::kThinPlateSpline, 1.0), PolyBasis(1, 2)));
  CHECK_THROWS_AS(assemble_dense(c, Kernel(KernelKind::kGaussian, 1.0), PolyBasis(1, 3)),
                  InvalidInput);
}

TEST_CASE("sparse assembly requires a compact kernel") {
  const PointCloud c(rows({{0, 0}, {1, 0}}));
  CHECK_THROWS_AS(assemble_sparse(c, Kernel(KernelKind::kGaussian, 1.0), PolyBasis::none(2)),
                  InvalidConfiguration);
}

TEST_CASE("unit line with support 1.25 is tridiagonal with 28 nonzeros") {
  Points line(10, 1);
  for (Index i = 0; i < 10; ++i) line(i, 0) = static_cast<double>(i);
  const auto sys = assemble_sparse(PointCloud(line), Kernel(KernelKind::kWendlandC2, 0.8),
                                   PolyBasis::none(1));
  CHECK(sys.sparse_b.nonZeros() == 28);
  for (Index i = 0; i < 10; ++i) {
    for (Index j = 0; j < 10; ++j) {
      CHECK((sys.b_dense()(i, j) != 0.0) == (std::abs(i - j) <= 1));
    }
  }
}

TEST_CASE("support below the minimum gap leaves only the diagonal") {
  Points line(10, 1);
  for (Index i = 0; i < 10; ++i) line(i, 0) = static_cast<double>(i);
  const auto sys = assemble_sparse(PointCloud(line), Kernel(KernelKind::kWendlandC2, 1.5),
                                   PolyBasis(1, 1));
  CHECK(sys.sparse_b.nonZeros() == 10);
}

TEST_CASE("sparse and dense assemblies agree exactly and are symmetric") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 3);
    const Index n = 20 + static_cast<Index>(seed * 16);
    const auto cloud = random_cloud(n, dim, seed);
    const auto kernel = rbfkit::testing::wendland_for(n, dim, 2.0 + static_cast<double>(seed % 4));
    const PolyBasis poly(static_cast<int>(seed % 3), dim);
    const auto dense = assemble_dense(cloud, kernel, poly);
    const auto sparse = assemble_sparse(cloud, kernel, poly);
    CHECK(sparse.full_matrix() == dense.full_matrix());
    CHECK(dense.full_matrix() == dense.full_matrix().transpose());
    CHECK(sparse.rhs == dense.rhs);
    CHECK(dense.dense_b.diagonal().isOnes(0.0));
    CHECK(sparse.full_norm_inf() == doctest::Approx(dense.full_norm_inf()).epsilon(1e-14));

    // The stored pattern is the radius-neighbor adjacency.
    const auto nbs = all_radius_neighbors(cloud, kernel.support_radius());
    for (Index i = 0; i < n; ++i) {
      std::set<Index> pattern;
      for (SparseMatrix::InnerIterator it(sparse.sparse_b, i); it; ++it) pattern.insert(it.col());
      std::set<Index> expected;
      for (const auto& nb : nbs[static_cast<std::size_t>(i)]) expected.insert(nb.index);
      CHECK(pattern == expected);
    }
  }
}

TEST_CASE("block multiply matches the dense full matrix") {
  const auto cloud = random_cloud(80, 2, 3);
  const auto sys = assemble_sparse(cloud, rbfkit::testing::wendland_for(80, 2), PolyBasis(2, 2));
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(-1, 1);
  Vector x(sys.n() + sys.m());
  for (Index i = 0; i < x.size(); ++i) x[i] = u(rng);
  CHECK((sys.multiply(x) - sys.full_matrix() * x).lpNorm<Eigen::Infinity>() <= 1e-13);
}

TEST_CASE("side condition defect") {
  const Points c = rows({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  InterpolantModel zero(Kernel(KernelKind::kWendlandC2, 1.0), 1, c, Vector::Zero(4),
                        Vector::Ones(3), NormalizeTransform::identity(2), {});
  CHECK(side_condition_defect(zero) == Vector::Zero(3));

  InterpolantModel no_tail(Kernel(KernelKind::kWendlandC2, 1.0), -1, c, Vector::Ones(4), Vector(),
                           NormalizeTransform::identity(2), {});
  CHECK(side_condition_defect(no_tail).size() == 0);

  Vector lam(4);
  lam << 1, -1, -1, 1;
  InterpolantModel balanced(Kernel(KernelKind::kWendlandC2, 1.0), 1, c, lam, Vector::Zero(3),
                            NormalizeTransform::identity(2), {});
  CHECK(side_condition_defect(balanced) == Vector::Zero(3));

  // A well-conditioned direct fit satisfies the side conditions to rounding.
  const auto cloud = random_cloud(20, 2, 8);
  const auto model = solve_direct(assemble_dense(cloud, rbfkit::testing::wendland_for(20, 2),
                                                 PolyBasis(1, 2)));
  const double bound = 1e-8 * model.lambda().lpNorm<1>() * model.fitting_centers().cwiseAbs().maxCoeff();
  CHECK(side_condition_defect(model).lpNorm<Eigen::Infinity>() <= bound);
}

TEST_CASE("prepare_system records the physical frame") {
  Points pts = rbfkit::testing::uniform_points(30, 2, 1);
  pts.array() += 500.0;
  const PointCloud cloud(pts);
  const Kernel k(KernelKind::kWendlandC2, 2.0);
  const auto sys = prepare_system(cloud, k, PolyBasis(1, 2), {Storage::kSparse, true});
  CHECK(sys.frame.kernel == k);
  CHECK(sys.frame.sites == pts);
  CHECK(sys.kernel.shape() == doctest::Approx(2.0 * sys.frame.transform.half_extent()));
  CHECK(sys.sites.points().cwiseAbs().maxCoeff() <= 1.0 + 1e-15);
}
