#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbfkit/assembly.hpp"
#include "rbfkit/kernels.hpp"
#include "rbfkit/normalize.hpp"

namespace rbfkit {

enum class SolverKind { kDirect, kSchur, kCg };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view name);

struct FitReport {
  SolverKind solver = SolverKind::kDirect;
  // ||M x - b||_inf of the assembled system at the returned solution.
  double residual = 0.0;
  // Per CG solve, in order: the m tail columns, the data, the final lambda.
  std::vector<int> cg_iterations;
};

struct CgOptions {
  double tol = 1e-10;
  // 0 selects 10 * N.
  int max_iter = 0;
};

// A fitted interpolant
//   f(x) = sum_j lambda_j phi(|x' - c_j'|) + a . monomials(x'),
// where primes denote fitting coordinates (x' = transform.apply(x)).
//
// The kernel and centers are stored in physical units as supplied by the
// caller; the fitting-coordinate versions are derived deterministically so a
// model rebuilt from the same fields evaluates bit-identically.
class InterpolantModel {
 public:
  InterpolantModel(Kernel kernel, int poly_degree, Points centers, Vector lambda,
                   Vector poly_coeffs, NormalizeTransform transform, FitReport report);

  const Kernel& kernel() const { return kernel_; }
  const PolyBasis& poly() const { return poly_; }
  const Points& centers() const { return centers_; }
  const Vector& lambda() const { return lambda_; }
  const Vector& poly_coeffs() const { return poly_coeffs_; }
  const NormalizeTransform& transform() const { return transform_; }
  const FitReport& report() const { return report_; }
  int dim() const { return poly_.dim(); }
  Index size() const { return centers_.rows(); }

  const Kernel& fitting_kernel() const;
  const Points& fitting_centers() const;

  double evaluate(std::span<const double> query) const;
  Vector evaluate(const Points& queries) const;

 private:
  struct Evaluator;

  Kernel kernel_;
  PolyBasis poly_;
  Points centers_;
  Vector lambda_;
  Vector poly_coeffs_;
  NormalizeTransform transform_;
  FitReport report_;
  std::shared_ptr<const Evaluator> evaluator_;
};

InterpolantModel solve_direct(const BlockSystem& system);
InterpolantModel solve_schur(const BlockSystem& system);
InterpolantModel solve_sparse_cg(const BlockSystem& system, double tol, int max_iter);
InterpolantModel solve(const BlockSystem& system, SolverKind kind, const CgOptions& cg = {});

// P^T lambda in fitting coordinates; every component vanishes for an exact fit.
Vector side_condition_defect(const InterpolantModel& model);

// Pivot magnitudes below this fraction of ||M||_inf are treated as singular.
inline constexpr double kSingularPivotFactor = 1e3;

struct GridAxis {
  double lo = 0.0;
  double hi = 0.0;
  Index count = 1;
};

// Cartesian grid; nodes are enumerated row-major (last axis fastest).
struct GridSpec {
  std::vector<GridAxis> axes;

  int dim() const { return static_cast<int>(axes.size()); }
  Index node_count() const;
  Points nodes() const;

  // "lo:hi:count[,lo:hi:count[,lo:hi:count]]"
  static GridSpec parse(std::string_view text);
};

Vector evaluate_grid(const InterpolantModel& model, const GridSpec& grid);

}  // namespace rbfkit
