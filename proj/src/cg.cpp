#include "rbfkit/cg.hpp"

#include <cmath>
#include <string>

#include "rbfkit/error.hpp"

namespace rbfkit {

CgResult conjugate_gradient(const SparseMatrix& a, const Vector& b, double tol, int max_iter) {
  if (a.rows() != a.cols() || a.rows() != b.size()) {
    throw InvalidInput("conjugate_gradient: shape mismatch");
  }
  if (!(tol > 0.0) || max_iter < 1) {
    throw InvalidConfiguration("conjugate_gradient: tol must be > 0 and max_iter >= 1");
  }
  const Index n = b.size();
  Vector inv_diag(n);
  for (Index i = 0; i < n; ++i) {
    const double d = a.coeff(i, i);
    if (!(d > 0.0)) {
      throw SingularB("conjugate_gradient: non-positive diagonal entry at row " + std::to_string(i),
                      d);
    }
    inv_diag[i] = 1.0 / d;
  }

  CgResult result;
  result.x = Vector::Zero(n);
  const double b_norm = b.norm();
  if (b_norm == 0.0) {
    return result;
  }
  const double target = tol * b_norm;

  Vector r = b;
  Vector z = inv_diag.cwiseProduct(r);
  Vector p = z;
  Vector q(n);
  double rz = r.dot(z);
  double r_norm = b_norm;
  int it = 0;
  while (it < max_iter) {
    ++it;
    q.noalias() = a * p;
    const double pq = p.dot(q);
    if (!(pq > 0.0)) {
      throw SingularB("conjugate_gradient: matrix is not positive definite (p^T A p = " +
                      fmt_real(pq) + ")",
                      pq);
    }
    const double step = rz / pq;
    result.x.noalias() += step * p;
    r.noalias() -= step * q;
    r_norm = r.norm();
    if (r_norm <= target) {
      break;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  result.iterations = it;
  result.relative_residual = (b - a * result.x).norm() / b_norm;
  if (r_norm > target) {
    throw NoConvergence("conjugate_gradient: no convergence after " + std::to_string(it) +
                            " iterations (relative residual " +
                            fmt_real(r_norm / b_norm) + ", tol " + fmt_real(tol) + ")",
                        r_norm / b_norm, it);
  }
  return result;
}

}  // namespace rbfkit
