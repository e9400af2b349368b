#pragma once
#include <Eigen/Dense>
#include <complex>

#include "scurnn/errors.hpp"

namespace scurnn {

using Complex = std::complex<double>;
using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Dimension-checked complex matrix product.
inline CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " * " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  return a * b;
}

inline CMat conj_transpose(const CMat& a) { return a.adjoint(); }

// Solves m * X = rhs by LU with partial pivoting. m must be square.
// A pivot that is zero to working precision signals a singular matrix.
inline CMat solve(const CMat& m, const CMat& rhs) {
  if (m.rows() != m.cols()) {
    throw DimensionError("solve: matrix not square");
  }
  if (rhs.rows() != m.rows()) {
    throw DimensionError("solve: rhs row count mismatch");
  }
  Eigen::PartialPivLU<CMat> lu(m);
  const auto diag = lu.matrixLU().diagonal();
  const double dmax = diag.cwiseAbs().maxCoeff();
  const double dmin = diag.cwiseAbs().minCoeff();
  if (dmax == 0.0 || dmin < dmax * m.rows() * 1e-15) {
    throw SingularMatrixError("solve: matrix singular to working precision");
  }
  return lu.solve(rhs);
}

inline double frobenius_norm(const CMat& a) { return a.norm(); }

}  // namespace scurnn
