#pragma once
#include <cstdint>

#include "scurnn/linalg.hpp"

namespace scurnn {

// A = X + iY with X skew-symmetric and Y symmetric. Only the strict lower
// triangle of X and the lower triangle of Y (diagonal included) are stored,
// so A stays exactly skew-Hermitian no matter what the optimizer does to
// the packed entries.
struct SkewHermitianParam {
  int n = 0;
  RVec x_lower;  // strict lower triangle of X, packed row by row (i > j)
  RVec y_lower;  // lower triangle of Y incl. diagonal, packed row by row (i >= j)

  static SkewHermitianParam zero(int n);

  // Packed index of X entry (i, j), i > j.
  static Eigen::Index x_index(int i, int j) {
    return static_cast<Eigen::Index>(i) * (i - 1) / 2 + j;
  }
  // Packed index of Y entry (i, j), i >= j.
  static Eigen::Index y_index(int i, int j) {
    return static_cast<Eigen::Index>(i) * (i + 1) / 2 + j;
  }

  RMat x_matrix() const;  // full X
  RMat y_matrix() const;  // full Y
  CMat matrix() const;    // A = X + iY
};

// Argument vector of the unitary diagonal scaling matrix D = diag(e^{i theta}).
struct UnitaryDiag {
  RVec theta;

  CVec diagonal() const {
    CVec d(theta.size());
    for (Eigen::Index j = 0; j < theta.size(); ++j) {
      d[j] = std::polar(1.0, theta[j]);
    }
    return d;
  }
};

// Everything the forward/backward passes need from the current (A, theta):
// K = (I+A)^{-1}(I-A), W = K D, and the LU factorization of I+A (reused by
// the transposed solves in grad_A).
struct CayleyCache {
  CMat k;
  CMat w;
  Eigen::PartialPivLU<CMat> lu_i_plus_a;

  double unitarity_error() const {
    return (w.adjoint() * w - CMat::Identity(w.rows(), w.cols())).norm();
  }
};

// Scaled Cayley transform W = (I+A)^{-1}(I-A)D. I+A is nonsingular for any
// skew-Hermitian A, so a singular solve means the parameters are corrupted.
CayleyCache build_unitary(const SkewHermitianParam& a, const UnitaryDiag& d);

// dL/dAbar = C^T - conj(C), C = (I+A)^{-T} dLdW (D + W^T).
// dLdW is the unconjugated Wirtinger derivative 1/2 (dL/dWre - i dL/dWim).
// The result is skew-Hermitian for any dLdW.
CMat grad_A(const CMat& dLdW, const CayleyCache& cache, const UnitaryDiag& d);

// dL/dtheta = 2 Re(i diag(dLdW^T K) .* d). Only the diagonal of dLdW^T K is
// formed.
RVec grad_theta(const CMat& dLdW, const CayleyCache& cache, const UnitaryDiag& d);

// Packed entrywise update directions used by the optimizer, matching the
// entrywise update A <- A - beta * dLdAbar of the stored triangles.
RVec pack_x_update(const CMat& g);  // Re(g_ij), i > j
RVec pack_y_update(const CMat& g);  // Im(g_ij), i >= j

// True gradients of the loss with respect to the packed parameters (the
// mirrored entries contribute too). Used by the finite-difference checks.
RVec pack_x_gradient(const CMat& g);  // 2 Re(g_ij), i > j
RVec pack_y_gradient(const CMat& g);  // 2 Im(g_ij) off-diagonal, Im(g_jj) diagonal

// X initialized from 2x2 rotation-like blocks [[0, s],[-s, 0]] with
// s = sqrt((1-cos t)/(1+cos t)), t ~ U[0, pi/2); Y = 0.
SkewHermitianParam init_A(int n, std::uint64_t seed);

// theta_j ~ U[0, 2pi), i.e. D uniformly distributed on the unit circle.
UnitaryDiag init_theta(int n, std::uint64_t seed);

}  // namespace scurnn
