#include "scurnn/cayley.hpp"

#include <random>

namespace scurnn {

SkewHermitianParam SkewHermitianParam::zero(int n) {
  SkewHermitianParam a;
  a.n = n;
  a.x_lower = RVec::Zero(static_cast<Eigen::Index>(n) * (n - 1) / 2);
  a.y_lower = RVec::Zero(static_cast<Eigen::Index>(n) * (n + 1) / 2);
  return a;
}

RMat SkewHermitianParam::x_matrix() const {
  RMat x = RMat::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double v = x_lower[x_index(i, j)];
      x(i, j) = v;
      x(j, i) = -v;
    }
  }
  return x;
}

RMat SkewHermitianParam::y_matrix() const {
  RMat y = RMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = y_lower[y_index(i, j)];
      y(i, j) = v;
      y(j, i) = v;
    }
  }
  return y;
}

CMat SkewHermitianParam::matrix() const {
  CMat a(n, n);
  a.real() = x_matrix();
  a.imag() = y_matrix();
  return a;
}

CayleyCache build_unitary(const SkewHermitianParam& a, const UnitaryDiag& d) {
  const int n = a.n;
  if (d.theta.size() != n) {
    throw DimensionError("build_unitary: theta length != n");
  }
  const CMat A = a.matrix();
  const CMat I = CMat::Identity(n, n);
  CayleyCache cache;
  cache.lu_i_plus_a.compute(I + A);
  const auto diag = cache.lu_i_plus_a.matrixLU().diagonal();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (dmax == 0.0 || diag.cwiseAbs().minCoeff() < dmax * n * 1e-15) {
    throw SingularMatrixError(
        "build_unitary: I+A singular; A is not skew-Hermitian");
  }
  cache.k = cache.lu_i_plus_a.solve(I - A);
  cache.w = cache.k * d.diagonal().asDiagonal();
  return cache;
}

CMat grad_A(const CMat& dLdW, const CayleyCache& cache, const UnitaryDiag& d) {
  const Eigen::Index n = cache.w.rows();
  if (dLdW.rows() != n || dLdW.cols() != n) {
    throw DimensionError("grad_A: dLdW shape mismatch");
  }
  // rhs = dLdW (D + W^T)
  CMat rhs = dLdW * d.diagonal().asDiagonal();
  rhs.noalias() += dLdW * cache.w.transpose();
  // C = (I+A)^{-T} rhs, via the transposed factorization of I+A.
  const CMat c = cache.lu_i_plus_a.transpose().solve(rhs);
  return c.transpose() - c.conjugate();
}

RVec grad_theta(const CMat& dLdW, const CayleyCache& cache,
                const UnitaryDiag& d) {
  const Eigen::Index n = cache.k.rows();
  if (dLdW.rows() != n || dLdW.cols() != n) {
    throw DimensionError("grad_theta: dLdW shape mismatch");
  }
  // diag(dLdW^T K)_j = sum_k dLdW(k,j) K(k,j)
  const CVec diag = (dLdW.array() * cache.k.array()).colwise().sum();
  RVec g(n);
  const Complex i_unit(0.0, 1.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    g[j] = 2.0 * std::real(i_unit * diag[j] * std::polar(1.0, d.theta[j]));
  }
  return g;
}

RVec pack_x_update(const CMat& g) {
  const int n = static_cast<int>(g.rows());
  RVec out(static_cast<Eigen::Index>(n) * (n - 1) / 2);
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      out[SkewHermitianParam::x_index(i, j)] = std::real(g(i, j));
    }
  }
  return out;
}

RVec pack_y_update(const CMat& g) {
  const int n = static_cast<int>(g.rows());
  RVec out(static_cast<Eigen::Index>(n) * (n + 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      out[SkewHermitianParam::y_index(i, j)] = std::imag(g(i, j));
    }
  }
  return out;
}

RVec pack_x_gradient(const CMat& g) { return 2.0 * pack_x_update(g); }

RVec pack_y_gradient(const CMat& g) {
  const int n = static_cast<int>(g.rows());
  RVec out = 2.0 * pack_y_update(g);
  for (int j = 0; j < n; ++j) {
    out[SkewHermitianParam::y_index(j, j)] = std::imag(g(j, j));
  }
  return out;
}

SkewHermitianParam init_A(int n, std::uint64_t seed) {
  SkewHermitianParam a = SkewHermitianParam::zero(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, M_PI / 2.0);
  for (int j = 0; j + 1 < n; j += 2) {
    const double t = uni(rng);
    const double s = std::sqrt((1.0 - std::cos(t)) / (1.0 + std::cos(t)));
    // block [[0, s], [-s, 0]]: stored lower entry (j+1, j) is -s
    a.x_lower[SkewHermitianParam::x_index(j + 1, j)] = -s;
  }
  return a;
}

UnitaryDiag init_theta(int n, std::uint64_t seed) {
  UnitaryDiag d;
  d.theta.resize(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  for (int j = 0; j < n; ++j) d.theta[j] = uni(rng);
  return d;
}

}  // namespace scurnn
