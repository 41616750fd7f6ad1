#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbfkit/assembly.hpp"
#include "rbfkit/solve.hpp"

namespace rbfkit {

// Determinant held as sign * exp(log_abs) so products of large systems
// neither overflow nor underflow. sign == 0 encodes an exactly singular matrix.
struct SignedLogDet {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();

  double value() const;
  SignedLogDet operator*(const SignedLogDet& other) const;
};

// 2-norm condition number sigma_max / sigma_min from a full SVD. Returns
// +infinity when sigma_min < eps * sigma_max.
double condition_estimate(const Matrix& matrix);

// Determinant by partial-pivot LU.
SignedLogDet log_determinant(const Matrix& matrix);

// det(P^T P) as prod(diag(R))^2 from a Householder QR of P, which avoids the
// cancellation of forming P^T P when the sites sit far from the origin.
SignedLogDet gram_determinant(const Matrix& p);

double max_abs_gram_entry(const Matrix& p);

struct DeterminantReport {
  SignedLogDet det_b;
  // det(-P^T B^-1 P); absent when B is singular.
  std::optional<SignedLogDet> det_schur;
  SignedLogDet det_full;
  // |det(M) - det(B) det(S)| / |det(M)|, NaN when det_schur is absent.
  double identity_rel_error = std::numeric_limits<double>::quiet_NaN();
};

inline constexpr Index kMaxDeterminantSize = 1000;

// det(B), det(-P^T B^-1 P) and det(M), each computed by its own factorization.
DeterminantReport determinant_report(const BlockSystem& system);

struct SparsityReport {
  Index n = 0;
  Index nnz = 0;
  double nnz_fraction = 0.0;
  double mean_neighbors = 0.0;
  Index bandwidth = 0;
  std::size_t sparse_bytes = 0;
  std::size_t dense_bytes = 0;
};

SparsityReport sparsity_report(const BlockSystem& system);

struct DiagnosticsReport {
  Index n = 0;
  Index m = 0;
  double cond_full = 0.0;
  double cond_b = 0.0;
  std::optional<DeterminantReport> determinants;
  SignedLogDet det_ptp;
  double max_ptp_entry = 0.0;
  // P^T lambda from a direct fit; empty if the fit failed.
  Vector side_defect;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
  double nnz_fraction = 1.0;
  std::optional<SparsityReport> sparsity;
};

DiagnosticsReport diagnose(const BlockSystem& system);

// Shifts every coordinate of every site by offset.
PointCloud translate(const PointCloud& cloud, double offset);

struct TranslationRecord {
  double offset = 0.0;
  double cond_raw = 0.0;
  double cond_normalized = 0.0;
  SignedLogDet det_ptp;
  double max_ptp_entry = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

// For each offset T, translates the sites by (T, ..., T), assembles without
// normalization and records conditioning, tail Gram statistics and the direct
// fit residual, plus the conditioning of the normalized pipeline. Solver
// failures are recorded in status rather than thrown.
std::vector<TranslationRecord> translation_experiment(const PointCloud& cloud,
                                                      const Kernel& kernel,
                                                      const PolyBasis& poly,
                                                      std::span<const double> offsets);

struct GramDrift {
  double det_raw = 0.0;
  double det_translated = 0.0;
  // |det_translated - det_raw| / |det_raw|; zero in exact arithmetic.
  double drift = 0.0;
};

GramDrift ptp_translation_invariance_check(const PointCloud& cloud, const PolyBasis& poly,
                                           double offset);

}  // namespace rbfkit
