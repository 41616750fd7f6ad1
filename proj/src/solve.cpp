#include "rbfkit/solve.hpp"

#include <lapacke.h>

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "rbfkit/cg.hpp"
#include "rbfkit/error.hpp"

namespace rbfkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double norm_inf(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().rowwise().sum().maxCoeff();
}

Vector solution_vector(const Vector& lambda, const Vector& a) {
  Vector x(lambda.size() + a.size());
  x << lambda, a;
  return x;
}

InterpolantModel make_model(const BlockSystem& system, Vector lambda, Vector a, SolverKind kind,
                            std::vector<int> cg_iterations = {}) {
  if (!lambda.allFinite() || !a.allFinite()) {
    throw SingularSystem("solution contains non-finite values", 0.0);
  }
  if (system.m() > 0) {
    // Project lambda onto null(P^T): the solve leaves P^T lambda ~ eps * |a|, which
    // dominates lambda itself when the data are nearly polynomial.
    lambda -= system.p * Eigen::ColPivHouseholderQR<Matrix>(system.p).solve(lambda);
  }
  FitReport report;
  report.solver = kind;
  report.residual = (system.multiply(solution_vector(lambda, a)) - system.rhs).lpNorm<Eigen::Infinity>();
  report.cg_iterations = std::move(cg_iterations);
  return InterpolantModel(system.frame.kernel, system.poly.degree(), system.frame.sites,
                          std::move(lambda), std::move(a), system.frame.transform,
                          std::move(report));
}

// Smallest |eigenvalue| of a symmetric 2x2 block [[a, b], [b, c]].
double min_abs_eig_2x2(double a, double b, double c) {
  const double mean = 0.5 * (a + c);
  const double rad = std::hypot(0.5 * (a - c), b);
  return std::min(std::abs(mean - rad), std::abs(mean + rad));
}

// Cholesky with a pivot floor; returns nullopt when the matrix is not
// numerically positive definite.
struct CholeskyCheck {
  Eigen::LLT<Matrix> llt;
  double min_pivot = 0.0;
  bool ok = false;
};

CholeskyCheck checked_cholesky(const Matrix& a) {
  CholeskyCheck out;
  out.llt.compute(a);
  if (out.llt.info() != Eigen::Success) {
    out.min_pivot = 0.0;
    return out;
  }
  const Vector diag = Matrix(out.llt.matrixL()).diagonal();
  out.min_pivot = diag.size() ? diag.cwiseAbs2().minCoeff() : 0.0;
  out.ok = out.min_pivot >= kSingularPivotFactor * kEps * norm_inf(a);
  return out;
}

}  // namespace

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::kDirect:
      return "direct";
    case SolverKind::kSchur:
      return "schur";
    case SolverKind::kCg:
      return "cg";
  }
  return "?";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "direct") return SolverKind::kDirect;
  if (name == "schur") return SolverKind::kSchur;
  if (name == "cg") return SolverKind::kCg;
  throw InvalidConfiguration("unknown solver '" + std::string(name) +
                             "' (expected direct|schur|cg)");
}

struct InterpolantModel::Evaluator {
  Kernel kernel;
  Points centers;
  std::optional<RadiusIndex> index;

  Evaluator(const Kernel& k, Points c) : kernel(k), centers(std::move(c)) {
    if (kernel.is_compact()) {
      index.emplace(centers, kernel.support_radius() * (1.0 + 1e-12));
    }
  }
};

InterpolantModel::InterpolantModel(Kernel kernel, int poly_degree, Points centers, Vector lambda,
                                   Vector poly_coeffs, NormalizeTransform transform,
                                   FitReport report)
    : kernel_(kernel),
      poly_(poly_degree, static_cast<int>(centers.cols())),
      centers_(std::move(centers)),
      lambda_(std::move(lambda)),
      poly_coeffs_(std::move(poly_coeffs)),
      transform_(std::move(transform)),
      report_(std::move(report)) {
  if (centers_.rows() < 1 || lambda_.size() != centers_.rows()) {
    throw InvalidInput("model: lambda length " + std::to_string(lambda_.size()) +
                       " does not match center count " + std::to_string(centers_.rows()));
  }
  if (poly_coeffs_.size() != poly_.size()) {
    throw InvalidInput("model: expected " + std::to_string(poly_.size()) +
                       " polynomial coefficients, got " + std::to_string(poly_coeffs_.size()));
  }
  if (transform_.dim() != poly_.dim()) {
    throw InvalidInput("model: normalization dimension does not match centers");
  }
  if (!centers_.allFinite() || !lambda_.allFinite() || !poly_coeffs_.allFinite()) {
    throw InvalidInput("model: centers, lambda and coefficients must be finite");
  }
  Points fitting(centers_.rows(), centers_.cols());
  const auto dim = static_cast<std::size_t>(centers_.cols());
  for (Index i = 0; i < centers_.rows(); ++i) {
    transform_.apply_into({centers_.data() + i * centers_.cols(), dim},
                          {fitting.data() + i * centers_.cols(), dim});
  }
  evaluator_ = std::make_shared<const Evaluator>(
      rescale_kernel(kernel_, transform_.half_extent()), std::move(fitting));
}

const Kernel& InterpolantModel::fitting_kernel() const { return evaluator_->kernel; }

const Points& InterpolantModel::fitting_centers() const { return evaluator_->centers; }

double InterpolantModel::evaluate(std::span<const double> query) const {
  if (query.size() != static_cast<std::size_t>(dim())) {
    throw InvalidInput("evaluate: query has " + std::to_string(query.size()) +
                       " components, model dimension is " + std::to_string(dim()));
  }
  const Evaluator& ev = *evaluator_;
  double x[3] = {0.0, 0.0, 0.0};
  const std::span<double> local(x, query.size());
  transform_.apply_into(query, local);
  const std::span<const double> xq(x, query.size());

  double sum = 0.0;
  if (ev.index) {
    for (const Neighbor& nb : ev.index->query(xq)) {
      sum += lambda_[nb.index] * ev.kernel(nb.distance);
    }
  } else {
    const auto d = static_cast<std::size_t>(dim());
    for (Index j = 0; j < size(); ++j) {
      sum += lambda_[j] * ev.kernel(distance(xq, {ev.centers.data() + j * dim(), d}));
    }
  }
  if (poly_.size() > 0) {
    double mono[10];
    poly_.evaluate(xq, {mono, static_cast<std::size_t>(poly_.size())});
    for (Index k = 0; k < poly_.size(); ++k) {
      sum += poly_coeffs_[k] * mono[k];
    }
  }
  return sum;
}

Vector InterpolantModel::evaluate(const Points& queries) const {
  if (queries.cols() != dim()) {
    throw InvalidInput("evaluate: query dimension mismatch");
  }
  Vector out(queries.rows());
  const auto d = static_cast<std::size_t>(dim());
  for (Index i = 0; i < queries.rows(); ++i) {
    out[i] = evaluate(std::span<const double>(queries.data() + i * queries.cols(), d));
  }
  return out;
}

InterpolantModel solve_direct(const BlockSystem& system) {
  const Index size = system.n() + system.m();
  Matrix full = system.full_matrix();
  const double threshold = kSingularPivotFactor * kEps * norm_inf(full);
  const auto lapack_n = static_cast<lapack_int>(size);

  std::vector<lapack_int> ipiv(static_cast<std::size_t>(size));
  // Bunch-Kaufman on the lower triangle; M is symmetric indefinite.
  const lapack_int info =
      LAPACKE_dsytrf(LAPACK_COL_MAJOR, 'L', lapack_n, full.data(), lapack_n, ipiv.data());
  if (info < 0) {
    throw InvalidInput("solve_direct: invalid factorization argument " + std::to_string(-info));
  }
  if (info > 0) {
    throw SingularSystem("solve_direct: exactly zero pivot at row " + std::to_string(info - 1),
                         0.0);
  }
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < size; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (ipiv[uk] > 0) {
      min_pivot = std::min(min_pivot, std::abs(full(k, k)));
    } else {
      min_pivot = std::min(min_pivot, min_abs_eig_2x2(full(k, k), full(k + 1, k), full(k + 1, k + 1)));
      ++k;
    }
  }
  if (min_pivot < threshold) {
    throw SingularSystem("solve_direct: near-singular system (pivot " + fmt_real(min_pivot) +
                             " below threshold " + fmt_real(threshold) + ")",
                         min_pivot);
  }
  Vector x = system.rhs;
  const lapack_int solve_info = LAPACKE_dsytrs(LAPACK_COL_MAJOR, 'L', lapack_n, 1, full.data(),
                                               lapack_n, ipiv.data(), x.data(), lapack_n);
  if (solve_info != 0) {
    throw SingularSystem("solve_direct: triangular solve failed", 0.0);
  }
  return make_model(system, x.head(system.n()), x.tail(system.m()), SolverKind::kDirect);
}

InterpolantModel solve_schur(const BlockSystem& system) {
  const Matrix b = system.b_dense();
  const CholeskyCheck chol_b = checked_cholesky(b);
  if (!chol_b.ok) {
    throw SingularB("solve_schur: B is not numerically positive definite (min pivot " +
                        fmt_real(chol_b.min_pivot) + ")",
                    chol_b.min_pivot);
  }
  const Vector h = system.rhs.head(system.n());
  if (system.m() == 0) {
    return make_model(system, chol_b.llt.solve(h), Vector(), SolverKind::kSchur);
  }
  const Matrix& p = system.p;
  const Matrix b_inv_p = chol_b.llt.solve(p);
  const Vector b_inv_h = chol_b.llt.solve(h);
  // The signed Schur complement is S = -P^T B^-1 P; factor its negation,
  // which is positive definite exactly when P has full column rank.
  Matrix neg_s = p.transpose() * b_inv_p;
  neg_s = 0.5 * (neg_s + neg_s.transpose()).eval();
  const CholeskyCheck chol_s = checked_cholesky(neg_s);
  if (!chol_s.ok) {
    throw RankDeficientP("solve_schur: P^T B^-1 P is singular, the polynomial tail is not "
                         "determined by the sites (min pivot " +
                             fmt_real(chol_s.min_pivot) + ")",
                         chol_s.min_pivot);
  }
  const Vector a = chol_s.llt.solve(p.transpose() * b_inv_h);
  Vector lambda = chol_b.llt.solve(h - p * a);
  return make_model(system, std::move(lambda), a, SolverKind::kSchur);
}

InterpolantModel solve_sparse_cg(const BlockSystem& system, double tol, int max_iter) {
  if (system.storage != Storage::kSparse) {
    throw InvalidConfiguration("solve_sparse_cg requires a sparse system (compact kernel)");
  }
  const SparseMatrix& b = system.sparse_b;
  const Vector h = system.rhs.head(system.n());
  std::vector<int> iterations;
  auto cg = [&](const Vector& rhs) {
    CgResult r = conjugate_gradient(b, rhs, tol, max_iter);
    iterations.push_back(r.iterations);
    return std::move(r.x);
  };

  if (system.m() == 0) {
    Vector lambda = cg(h);
    return make_model(system, std::move(lambda), Vector(), SolverKind::kCg, std::move(iterations));
  }
  const Matrix& p = system.p;
  Matrix b_inv_p(system.n(), system.m());
  for (Index k = 0; k < system.m(); ++k) {
    b_inv_p.col(k) = cg(p.col(k));
  }
  const Vector b_inv_h = cg(h);
  Matrix neg_s = p.transpose() * b_inv_p;
  neg_s = 0.5 * (neg_s + neg_s.transpose()).eval();
  const CholeskyCheck chol_s = checked_cholesky(neg_s);
  if (!chol_s.ok) {
    throw RankDeficientP("solve_sparse_cg: P^T B^-1 P is singular (min pivot " +
                             fmt_real(chol_s.min_pivot) + ")",
                         chol_s.min_pivot);
  }
  const Vector a = chol_s.llt.solve(p.transpose() * b_inv_h);
  Vector lambda = cg(h - p * a);
  return make_model(system, std::move(lambda), a, SolverKind::kCg, std::move(iterations));
}

InterpolantModel solve(const BlockSystem& system, SolverKind kind, const CgOptions& cg) {
  switch (kind) {
    case SolverKind::kDirect:
      return solve_direct(system);
    case SolverKind::kSchur:
      return solve_schur(system);
    case SolverKind::kCg: {
      const int max_iter =
          cg.max_iter > 0 ? cg.max_iter : static_cast<int>(std::max<Index>(1, 10 * system.n()));
      return solve_sparse_cg(system, cg.tol, max_iter);
    }
  }
  throw InvalidConfiguration("unknown solver");
}

Vector side_condition_defect(const InterpolantModel& model) {
  const PolyBasis& poly = model.poly();
  Vector defect = Vector::Zero(poly.size());
  if (poly.size() == 0) {
    return defect;
  }
  const Points& c = model.fitting_centers();
  const auto d = static_cast<std::size_t>(c.cols());
  std::vector<double> mono(static_cast<std::size_t>(poly.size()));
  for (Index j = 0; j < c.rows(); ++j) {
    poly.evaluate({c.data() + j * c.cols(), d}, mono);
    for (Index k = 0; k < poly.size(); ++k) {
      defect[k] += model.lambda()[j] * mono[static_cast<std::size_t>(k)];
    }
  }
  return defect;
}

Index GridSpec::node_count() const {
  Index count = axes.empty() ? 0 : 1;
  for (const GridAxis& a : axes) count *= a.count;
  return count;
}

Points GridSpec::nodes() const {
  const Index total = node_count();
  Points out(total, dim());
  for (Index flat = 0; flat < total; ++flat) {
    Index rest = flat;
    for (int k = dim() - 1; k >= 0; --k) {
      const GridAxis& a = axes[static_cast<std::size_t>(k)];
      const Index i = rest % a.count;
      rest /= a.count;
      double v = a.lo;
      if (a.count > 1) {
        v = (i == a.count - 1) ? a.hi
                               : a.lo + (a.hi - a.lo) * (static_cast<double>(i) /
                                                         static_cast<double>(a.count - 1));
      }
      out(flat, k) = v;
    }
  }
  return out;
}

GridSpec GridSpec::parse(std::string_view text) {
  GridSpec spec;
  auto fail = [&](const std::string& why) {
    return InvalidInput("malformed grid spec '" + std::string(text) + "': " + why +
                        " (expected lo:hi:count[,lo:hi:count...])");
  };
  auto to_double = [&](std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw fail("bad number '" + std::string(s) + "'");
    }
    return v;
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view axis = text.substr(start, comma - start);
    const std::size_t c1 = axis.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : axis.find(':', c1 + 1);
    if (c2 == std::string_view::npos || axis.find(':', c2 + 1) != std::string_view::npos) {
      throw fail("axis '" + std::string(axis) + "' needs three fields");
    }
    GridAxis a;
    a.lo = to_double(axis.substr(0, c1));
    a.hi = to_double(axis.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view count = axis.substr(c2 + 1);
    long long n = 0;
    auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
    if (ec != std::errc() || ptr != count.data() + count.size() || n < 1) {
      throw fail("count must be an integer >= 1");
    }
    a.count = static_cast<Index>(n);
    spec.axes.push_back(a);
    start = comma + 1;
  }
  if (spec.axes.empty() || spec.axes.size() > 3) {
    throw fail("1 to 3 axes required");
  }
  return spec;
}

Vector evaluate_grid(const InterpolantModel& model, const GridSpec& grid) {
  if (grid.dim() != model.dim()) {
    throw InvalidInput("evaluate_grid: grid has " + std::to_string(grid.dim()) +
                       " axes, model dimension is " + std::to_string(model.dim()));
  }
  for (const GridAxis& a : grid.axes) {
    if (a.count < 1 || !std::isfinite(a.lo) || !std::isfinite(a.hi)) {
      throw InvalidInput("evaluate_grid: axis counts must be >= 1 with finite bounds");
    }
  }
  return model.evaluate(grid.nodes());
}

}  // namespace rbfkit
