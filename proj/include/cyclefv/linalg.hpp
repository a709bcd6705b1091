#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cyclefv {

/// A dense linear solve failed (near-singular system or residual too large).
struct SolveError : std::runtime_error {
  explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Solves A x = b by partial-pivot LU. Throws SolveError when the smallest
/// pivot magnitude falls below 1e-14 times the largest, which signals a
/// numerically singular system rather than returning garbage.
inline Vector solve_dense(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols() || A.rows() != b.size())
    throw std::invalid_argument("solve_dense: shape mismatch");
  Eigen::PartialPivLU<Matrix> lu(A);
  const Vector diag = lu.matrixLU().diagonal().cwiseAbs();
  const double pmax = diag.maxCoeff();
  const double pmin = diag.minCoeff();
  if (!(pmax > 0.0) || pmin < 1e-14 * pmax)
    throw SolveError("solve_dense: pivot ratio below 1e-14, system is singular");
  return lu.solve(b);
}

/// Kronecker product A (x) B with block layout
/// (A (x) B)[r1*B.rows()+r2, c1*B.cols()+c2] = A(r1,c1) * B(r2,c2).
inline Matrix kron(const Matrix& A, const Matrix& B) {
  Matrix out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index r = 0; r < A.rows(); ++r)
    for (Eigen::Index c = 0; c < A.cols(); ++c)
      out.block(r * B.rows(), c * B.cols(), B.rows(), B.cols()) = A(r, c) * B;
  return out;
}

/// Left null row of an irreducible generator, normalized to sum 1: the unique
/// nu with nu L = 0 and sum(nu) = 1. One equation of the transposed system is
/// replaced by the normalization constraint, which makes the system regular.
inline Vector stationary_row(const Matrix& L) {
  if (L.rows() != L.cols()) throw std::invalid_argument("stationary_row: not square");
  Matrix A = L.transpose();
  A.row(0).setOnes();
  Vector b = Vector::Zero(L.rows());
  b(0) = 1.0;
  return solve_dense(A, b);
}

}  // namespace cyclefv
