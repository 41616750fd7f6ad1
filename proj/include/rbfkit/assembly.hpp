#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <span>
#include <string>
#include <vector>

#include "rbfkit/geometry.hpp"
#include "rbfkit/kernels.hpp"
#include "rbfkit/normalize.hpp"

namespace rbfkit {

using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Monomial tail of total degree <= degree. Column order is fixed:
//   1, x, y, z, then the degree-2 terms x^2, xy, xz, y^2, yz, z^2
// (restricted to the first `dim` coordinates). degree == -1 means no tail.
class PolyBasis {
 public:
  PolyBasis(int degree, int dim);

  static PolyBasis none(int dim) { return PolyBasis(-1, dim); }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  // m = C(degree + dim, dim), or 0 without a tail.
  Index size() const { return size_; }

  void evaluate(std::span<const double> x, std::span<double> out) const;
  std::vector<std::string> names() const;

  friend bool operator==(const PolyBasis&, const PolyBasis&) = default;

 private:
  int degree_;
  int dim_;
  Index size_;
};

enum class Storage { kDense, kSparse };

// Physical (user-facing) description of a fit: the kernel and sites as given,
// plus the normalization applied before assembly.
struct FitFrame {
  Kernel kernel;
  Points sites;
  NormalizeTransform transform;
};

// The augmented system [[B, P], [P^T, 0]] [lambda; a] = [h; 0], assembled in
// fitting coordinates.
struct BlockSystem {
  Kernel kernel;
  PolyBasis poly;
  PointCloud sites;
  Storage storage;
  Matrix dense_b;         // N x N, populated when storage == kDense
  SparseMatrix sparse_b;  // N x N, populated when storage == kSparse
  Matrix p;               // N x m
  Vector rhs;             // N + m, trailing m entries are 0
  FitFrame frame;

  Index n() const { return sites.size(); }
  Index m() const { return poly.size(); }

  Matrix b_dense() const;
  Matrix full_matrix() const;
  // ||M||_inf (max absolute row sum), computed without densifying.
  double full_norm_inf() const;
  // M * x for x of length N + m.
  Vector multiply(const Vector& x) const;
};

// Throws InvalidConfiguration if the tail cannot make the kernel's system
// well posed (TPS needs degree >= 1, multiquadric degree >= 0).
void check_kernel_poly(const Kernel& kernel, const PolyBasis& poly);

// N x m matrix of tail monomials evaluated at the sites.
Matrix tail_matrix(const PointCloud& cloud, const PolyBasis& poly);

BlockSystem assemble_dense(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly);
BlockSystem assemble_sparse(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly);

struct SystemOptions {
  Storage storage = Storage::kDense;
  bool normalize = true;
};

// Optionally normalizes the cloud (rescaling the kernel to keep its physical
// support) and assembles. The returned frame records the physical inputs.
BlockSystem prepare_system(const PointCloud& cloud, const Kernel& kernel, const PolyBasis& poly,
                           const SystemOptions& options);

}  // namespace rbfkit
