#include "rbfkit/diagnostics.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Relative error of a*b against c, evaluated in log space.
double product_rel_error(const SignedLogDet& a, const SignedLogDet& b, const SignedLogDet& c) {
  const SignedLogDet ab = a * b;
  if (c.sign == 0) {
    return ab.sign == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (ab.sign == 0) {
    return 1.0;
  }
  const double ratio = static_cast<double>(ab.sign * c.sign) * std::exp(ab.log_abs - c.log_abs);
  return std::abs(1.0 - ratio);
}

}  // namespace

double SignedLogDet::value() const {
  return sign == 0 ? 0.0 : static_cast<double>(sign) * std::exp(log_abs);
}

SignedLogDet SignedLogDet::operator*(const SignedLogDet& other) const {
  if (sign == 0 || other.sign == 0) {
    return {};
  }
  return {sign * other.sign, log_abs + other.log_abs};
}

double condition_estimate(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidInput("condition_estimate: matrix is " + std::to_string(matrix.rows()) + "x" +
                       std::to_string(matrix.cols()) + ", expected square");
  }
  if (!matrix.allFinite()) {
    throw InvalidInput("condition_estimate: matrix has non-finite entries");
  }
  if (matrix.size() == 0) {
    return 1.0;
  }
  const Eigen::BDCSVD<Matrix> svd(matrix);
  const auto& s = svd.singularValues();
  const double s_max = s.maxCoeff();
  const double s_min = s.minCoeff();
  if (s_max == 0.0 || s_min < kEps * s_max) {
    return std::numeric_limits<double>::infinity();
  }
  return s_max / s_min;
}

SignedLogDet log_determinant(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidInput("log_determinant: matrix must be square");
  }
  if (matrix.size() == 0) {
    return {1, 0.0};
  }
  const Eigen::PartialPivLU<Matrix> lu(matrix);
  const Matrix& packed = lu.matrixLU();
  SignedLogDet out{static_cast<int>(lu.permutationP().determinant()), 0.0};
  for (Index k = 0; k < packed.rows(); ++k) {
    const double u = packed(k, k);
    if (u == 0.0) {
      return {};
    }
    if (u < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(u));
  }
  return out;
}

SignedLogDet gram_determinant(const Matrix& p) {
  if (p.cols() == 0) {
    return {1, 0.0};
  }
  if (p.rows() < p.cols()) {
    return {};
  }
  const Eigen::HouseholderQR<Matrix> qr(p);
  const Matrix& packed = qr.matrixQR();
  SignedLogDet out{1, 0.0};
  for (Index k = 0; k < p.cols(); ++k) {
    const double r = packed(k, k);
    if (r == 0.0) {
      return {};
    }
    out.log_abs += 2.0 * std::log(std::abs(r));
  }
  return out;
}

double max_abs_gram_entry(const Matrix& p) {
  if (p.cols() == 0) {
    return 0.0;
  }
  return (p.transpose() * p).cwiseAbs().maxCoeff();
}

DeterminantReport determinant_report(const BlockSystem& system) {
  if (system.n() + system.m() > kMaxDeterminantSize) {
    throw InvalidConfiguration("determinant_report: system size " +
                               std::to_string(system.n() + system.m()) + " exceeds " +
                               std::to_string(kMaxDeterminantSize));
  }
  const Matrix b = system.b_dense();
  DeterminantReport report;
  report.det_full = log_determinant(system.full_matrix());

  const Eigen::PartialPivLU<Matrix> lu_b(b);
  const double b_norm = b.cwiseAbs().rowwise().sum().maxCoeff();
  const double min_pivot = lu_b.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < kSingularPivotFactor * kEps * b_norm) {
    return report;
  }
  report.det_b = log_determinant(b);
  const Matrix s = -(system.p.transpose() * lu_b.solve(system.p));
  report.det_schur = log_determinant(s);
  report.identity_rel_error = product_rel_error(report.det_b, *report.det_schur, report.det_full);
  return report;
}

SparsityReport sparsity_report(const BlockSystem& system) {
  if (system.storage != Storage::kSparse) {
    throw InvalidConfiguration("sparsity_report requires a sparse system");
  }
  const SparseMatrix& b = system.sparse_b;
  SparsityReport out;
  out.n = system.n();
  out.nnz = b.nonZeros();
  const double n = static_cast<double>(out.n);
  out.nnz_fraction = static_cast<double>(out.nnz) / (n * n);
  out.mean_neighbors = static_cast<double>(out.nnz) / n;
  for (Index i = 0; i < b.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(b, i); it; ++it) {
      out.bandwidth = std::max<Index>(out.bandwidth, std::abs(it.col() - i));
    }
  }
  using StorageIndex = SparseMatrix::StorageIndex;
  out.sparse_bytes = static_cast<std::size_t>(out.nnz) * (sizeof(double) + sizeof(StorageIndex)) +
                     static_cast<std::size_t>(out.n + 1) * sizeof(StorageIndex);
  out.dense_bytes = static_cast<std::size_t>(out.n) * static_cast<std::size_t>(out.n) * sizeof(double);
  return out;
}

DiagnosticsReport diagnose(const BlockSystem& system) {
  DiagnosticsReport report;
  report.n = system.n();
  report.m = system.m();
  const Matrix full = system.full_matrix();
  report.cond_full = condition_estimate(full);
  report.cond_b = condition_estimate(full.topLeftCorner(system.n(), system.n()));
  if (system.n() + system.m() <= kMaxDeterminantSize) {
    report.determinants = determinant_report(system);
  }
  report.det_ptp = gram_determinant(system.p);
  report.max_ptp_entry = max_abs_gram_entry(system.p);
  if (system.storage == Storage::kSparse) {
    report.sparsity = sparsity_report(system);
    report.nnz_fraction = report.sparsity->nnz_fraction;
  } else {
    const double n = static_cast<double>(system.n());
    report.nnz_fraction = static_cast<double>((system.dense_b.array() != 0.0).count()) / (n * n);
  }
  try {
    const InterpolantModel model = solve_direct(system);
    report.side_defect = side_condition_defect(model);
    report.residual = model.report().residual;
  } catch (const Error& e) {
    if (!e.is_numerical()) throw;
    report.status = std::string("failed: ") + e.what();
  }
  return report;
}

PointCloud translate(const PointCloud& cloud, double offset) {
  Points shifted = cloud.points().array() + offset;
  return PointCloud(std::move(shifted), cloud.values());
}

std::vector<TranslationRecord> translation_experiment(const PointCloud& cloud,
                                                      const Kernel& kernel,
                                                      const PolyBasis& poly,
                                                      std::span<const double> offsets) {
  if (std::find(offsets.begin(), offsets.end(), 0.0) == offsets.end()) {
    throw InvalidConfiguration("translation_experiment: offsets must include 0");
  }
  std::vector<TranslationRecord> records;
  records.reserve(offsets.size());
  for (const double offset : offsets) {
    TranslationRecord rec;
    rec.offset = offset;
    const PointCloud shifted = translate(cloud, offset);
    const BlockSystem raw = assemble_dense(shifted, kernel, poly);
    rec.cond_raw = condition_estimate(raw.full_matrix());
    rec.det_ptp = gram_determinant(raw.p);
    rec.max_ptp_entry = max_abs_gram_entry(raw.p);
    try {
      rec.residual = solve_direct(raw).report().residual;
    } catch (const Error& e) {
      if (!e.is_numerical()) throw;
      rec.status = std::string("failed: ") + e.what();
    }
    const BlockSystem normalized =
        prepare_system(shifted, kernel, poly, SystemOptions{Storage::kDense, true});
    rec.cond_normalized = condition_estimate(normalized.full_matrix());
    records.push_back(std::move(rec));
  }
  return records;
}

GramDrift ptp_translation_invariance_check(const PointCloud& cloud, const PolyBasis& poly,
                                           double offset) {
  if (poly.dim() != cloud.dim()) {
    throw InvalidInput("ptp_translation_invariance_check: dimension mismatch");
  }
  if (cloud.size() < poly.size()) {
    throw InvalidInput("ptp_translation_invariance_check: need at least m sites");
  }
  GramDrift out;
  out.det_raw = gram_determinant(tail_matrix(cloud, poly)).value();
  out.det_translated = gram_determinant(tail_matrix(translate(cloud, offset), poly)).value();
  out.drift = out.det_raw == 0.0
                  ? (out.det_translated == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                  : std::abs(out.det_translated - out.det_raw) / std::abs(out.det_raw);
  return out;
}

}  // namespace rbfkit
