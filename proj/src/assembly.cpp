#include "rbfkit/assembly.hpp"

#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

namespace {

Index binomial(int n, int k) {
  Index r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// The compact support test in the kernel is t >= 1 with t = shape * r; widening
// the search radius slightly keeps rounding at the boundary from dropping a
// (tiny) nonzero entry. Entries the kernel zeroes are not stored.
double search_radius(const Kernel& kernel) { return kernel.support_radius() * (1.0 + 1e-12); }

void check_inputs(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly) {
  if (poly.dim() != cloud.dim()) {
    throw InvalidInput("polynomial basis dimension " + std::to_string(poly.dim()) +
                       " does not match cloud dimension " + std::to_string(cloud.dim()));
  }
  check_kernel_poly(kernel, poly);
  if (auto dup = find_duplicate(cloud.points())) {
    throw DegenerateInput("duplicate sites at indices " + std::to_string(dup->first) + " and " +
                          std::to_string(dup->second) + " make B singular");
  }
}

Vector augmented_rhs(const PointCloud& cloud, Index m) {
  Vector rhs = Vector::Zero(cloud.size() + m);
  rhs.head(cloud.size()) = cloud.values();
  return rhs;
}

FitFrame identity_frame(const PointCloud& cloud, const Kernel& kernel) {
  return FitFrame{kernel, cloud.points(), NormalizeTransform::identity(cloud.dim())};
}

}  // namespace

PolyBasis::PolyBasis(int degree, int dim) : degree_(degree), dim_(dim) {
  if (dim < 1 || dim > 3) {
    throw InvalidConfiguration("polynomial basis dimension must be 1..3");
  }
  if (degree < -1 || degree > 2) {
    throw InvalidConfiguration("polynomial degree must be none, 0, 1 or 2, got " +
                               std::to_string(degree));
  }
  size_ = degree < 0 ? 0 : binomial(degree + dim, dim);
}

void PolyBasis::evaluate(std::span<const double> x, std::span<double> out) const {
  if (x.size() != static_cast<std::size_t>(dim_) || out.size() != static_cast<std::size_t>(size_)) {
    throw InvalidInput("polynomial basis: dimension mismatch");
  }
  if (degree_ < 0) {
    return;
  }
  std::size_t k = 0;
  out[k++] = 1.0;
  if (degree_ >= 1) {
    for (int a = 0; a < dim_; ++a) {
      out[k++] = x[static_cast<std::size_t>(a)];
    }
  }
  if (degree_ >= 2) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        out[k++] = x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(b)];
      }
    }
  }
}

std::vector<std::string> PolyBasis::names() const {
  static constexpr const char* kAxis[] = {"x", "y", "z"};
  std::vector<std::string> out;
  if (degree_ < 0) {
    return out;
  }
  out.emplace_back("1");
  if (degree_ >= 1) {
    for (int a = 0; a < dim_; ++a) out.emplace_back(kAxis[a]);
  }
  if (degree_ >= 2) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        out.push_back(a == b ? std::string(kAxis[a]) + "^2" : std::string(kAxis[a]) + kAxis[b]);
      }
    }
  }
  return out;
}

Matrix BlockSystem::b_dense() const {
  return storage == Storage::kDense ? dense_b : Matrix(sparse_b);
}

Matrix BlockSystem::full_matrix() const {
  const Index nn = n();
  const Index mm = m();
  Matrix full = Matrix::Zero(nn + mm, nn + mm);
  full.topLeftCorner(nn, nn) = b_dense();
  full.topRightCorner(nn, mm) = p;
  full.bottomLeftCorner(mm, nn) = p.transpose();
  return full;
}

double BlockSystem::full_norm_inf() const {
  Vector rows(n() + m());
  if (storage == Storage::kDense) {
    rows.head(n()) = dense_b.cwiseAbs().rowwise().sum();
  } else {
    rows.head(n()) = sparse_b.cwiseAbs() * Vector::Ones(n());
  }
  rows.head(n()) += p.cwiseAbs().rowwise().sum();
  rows.tail(m()) = p.cwiseAbs().colwise().sum().transpose();
  return rows.size() > 0 ? rows.maxCoeff() : 0.0;
}

Vector BlockSystem::multiply(const Vector& x) const {
  if (x.size() != n() + m()) {
    throw InvalidInput("block system multiply: length mismatch");
  }
  Vector y(n() + m());
  const auto lambda = x.head(n());
  const auto a = x.tail(m());
  if (storage == Storage::kDense) {
    y.head(n()) = dense_b * lambda;
  } else {
    y.head(n()) = sparse_b * lambda;
  }
  y.head(n()) += p * a;
  y.tail(m()) = p.transpose() * lambda;
  return y;
}

Matrix tail_matrix(const PointCloud& cloud, const PolyBasis& poly) {
  Matrix p(cloud.size(), poly.size());
  std::vector<double> row(static_cast<std::size_t>(poly.size()));
  for (Index i = 0; i < cloud.size(); ++i) {
    poly.evaluate(cloud.point(i), row);
    for (Index k = 0; k < poly.size(); ++k) {
      p(i, k) = row[static_cast<std::size_t>(k)];
    }
  }
  return p;
}

void check_kernel_poly(const Kernel& kernel, const PolyBasis& poly) {
  if (poly.degree() < kernel.min_poly_degree()) {
    throw InvalidConfiguration(std::string(to_string(kernel.kind())) +
                               " requires a polynomial tail of degree >= " +
                               std::to_string(kernel.min_poly_degree()));
  }
}

BlockSystem assemble_dense(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly) {
  check_inputs(cloud, kernel, poly);
  const Index n = cloud.size();
  Matrix b(n, n);
  for (Index i = 0; i < n; ++i) {
    b(i, i) = kernel(0.0);
    for (Index j = i + 1; j < n; ++j) {
      const double v = kernel(distance(cloud.point(i), cloud.point(j)));
      b(i, j) = v;
      b(j, i) = v;
    }
  }
  return BlockSystem{kernel,
                     poly,
                     cloud,
                     Storage::kDense,
                     std::move(b),
                     SparseMatrix(),
                     tail_matrix(cloud, poly),
                     augmented_rhs(cloud, poly.size()),
                     identity_frame(cloud, kernel)};
}

BlockSystem assemble_sparse(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly) {
  if (!kernel.is_compact()) {
    throw InvalidConfiguration("sparse assembly requires a compactly supported kernel, got " +
                               std::string(to_string(kernel.kind())));
  }
  check_inputs(cloud, kernel, poly);
  const Index n = cloud.size();
  const auto neighbors = all_radius_neighbors(cloud, search_radius(kernel));

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t total = 0;
  for (const auto& row : neighbors) total += row.size();
  triplets.reserve(total);
  for (Index i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, kernel(0.0));
    for (const Neighbor& nb : neighbors[static_cast<std::size_t>(i)]) {
      if (nb.index <= i) {
        continue;
      }
      // Same argument order as the dense path so the entries agree bitwise.
      const double v = kernel(distance(cloud.point(i), cloud.point(nb.index)));
      if (v != 0.0) {
        triplets.emplace_back(i, nb.index, v);
        triplets.emplace_back(nb.index, i, v);
      }
    }
  }
  SparseMatrix b(n, n);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  return BlockSystem{kernel,
                     poly,
                     cloud,
                     Storage::kSparse,
                     Matrix(),
                     std::move(b),
                     tail_matrix(cloud, poly),
                     augmented_rhs(cloud, poly.size()),
                     identity_frame(cloud, kernel)};
}

BlockSystem prepare_system(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly,
                           const SystemOptions& options) {
  const NormalizeTransform transform =
      options.normalize ? fit_transform(cloud) : NormalizeTransform::identity(cloud.dim());
  const PointCloud fitting = transform.apply(cloud);
  const Kernel fitting_kernel = rescale_kernel(kernel, transform.half_extent());
  BlockSystem system = options.storage == Storage::kSparse
                           ? assemble_sparse(fitting, fitting_kernel, poly)
                           : assemble_dense(fitting, fitting_kernel, poly);
  system.frame = FitFrame{kernel, cloud.points(), transform};
  return system;
}

}  // namespace rbfkit
