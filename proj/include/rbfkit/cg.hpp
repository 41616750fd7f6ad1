#pragma once

#include "rbfkit/assembly.hpp"

namespace rbfkit {

struct CgResult {
  Vector x;
  int iterations = 0;
  // ||b - A x||_2 / ||b||_2, recomputed from the returned x.
  double relative_residual = 0.0;
};

// Jacobi-preconditioned conjugate gradients for a symmetric positive definite
// sparse matrix, started from x = 0. Stops once the recurrence residual drops
// to tol * ||b||_2; throws NoConvergence after max_iter iterations otherwise.
CgResult conjugate_gradient(const SparseMatrix& a, const Vector& b, double tol, int max_iter);

}  // namespace rbfkit
