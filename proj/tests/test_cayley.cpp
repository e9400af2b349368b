#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "scurnn/cayley.hpp"

using namespace scurnn;

namespace {

SkewHermitianParam random_A(int n, std::uint64_t seed, double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  SkewHermitianParam a = SkewHermitianParam::zero(n);
  for (Eigen::Index i = 0; i < a.x_lower.size(); ++i) a.x_lower[i] = g(rng);
  for (Eigen::Index i = 0; i < a.y_lower.size(); ++i) a.y_lower[i] = g(rng);
  return a;
}

UnitaryDiag random_theta(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  UnitaryDiag d;
  d.theta = RVec::NullaryExpr(n, [&]() { return u(rng); });
  return d;
}

CMat random_cmat(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

// Scalar objective L = sum Re(conj(G0) .* W); its unconjugated Wirtinger
// derivative is conj(G0)/2.
double loss_of(const CMat& g0, const SkewHermitianParam& a,
               const UnitaryDiag& d) {
  const CMat w = build_unitary(a, d).w;
  return (g0.conjugate().cwiseProduct(w)).real().sum();
}

}  // namespace

TEST_CASE("packed storage round-trips and is exactly skew-Hermitian") {
  const SkewHermitianParam a = random_A(7, 42);
  const CMat m = a.matrix();
  CHECK((m + m.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  const RMat x = a.x_matrix();
  const RMat y = a.y_matrix();
  CHECK((x + x.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((y - y.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m(3, 1) == Complex(a.x_lower[SkewHermitianParam::x_index(3, 1)],
                           a.y_lower[SkewHermitianParam::y_index(3, 1)]));
  CHECK(m(2, 2) == Complex(0.0, a.y_lower[SkewHermitianParam::y_index(2, 2)]));
}

TEST_CASE("build_unitary hand cases") {
  // A = 0, theta = 0 -> W = I
  SkewHermitianParam a0 = SkewHermitianParam::zero(3);
  UnitaryDiag d0{RVec::Zero(3)};
  CHECK((build_unitary(a0, d0).w - CMat::Identity(3, 3)).norm() < 1e-14);

  // n = 1, A = [[i]]: K = (1-i)/(1+i) = -i
  SkewHermitianParam a1 = SkewHermitianParam::zero(1);
  a1.y_lower[0] = 1.0;
  UnitaryDiag d1{RVec::Zero(1)};
  CHECK(std::abs(build_unitary(a1, d1).w(0, 0) - Complex(0, -1)) < 1e-14);

  // n = 1, A = 0, theta = pi/2 -> W = [[i]]
  UnitaryDiag dq{RVec::Constant(1, M_PI / 2)};
  SkewHermitianParam az = SkewHermitianParam::zero(1);
  CHECK(std::abs(build_unitary(az, dq).w(0, 0) - Complex(0, 1)) < 1e-14);

  // n = 2, A = [[0, i], [i, 0]]: A^2 = -I so K = -A
  SkewHermitianParam a2 = SkewHermitianParam::zero(2);
  a2.y_lower[SkewHermitianParam::y_index(1, 0)] = 1.0;
  UnitaryDiag d2{RVec::Zero(2)};
  const CMat w2 = build_unitary(a2, d2).w;
  CHECK((w2 - (-a2.matrix())).norm() < 1e-14);

  // (I+A) W = (I-A) D holds by construction
  const SkewHermitianParam ar = random_A(6, 5);
  const UnitaryDiag dr = random_theta(6, 6);
  const CayleyCache c = build_unitary(ar, dr);
  const CMat lhs = (CMat::Identity(6, 6) + ar.matrix()) * c.w;
  const CMat rhs = (CMat::Identity(6, 6) - ar.matrix()) * dr.diagonal().asDiagonal().toDenseMatrix();
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("W is unitary for random parameters") {
  for (int n : {1, 2, 8, 64}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const CayleyCache c =
          build_unitary(random_A(n, 10 * n + s, 1.0), random_theta(n, 20 * n + s));
      CHECK(c.unitarity_error() <= 1e-10);
    }
  }
}

TEST_CASE("grad_A is zero for zero upstream and skew-Hermitian always") {
  const SkewHermitianParam a = random_A(5, 77);
  const UnitaryDiag d = random_theta(5, 78);
  const CayleyCache c = build_unitary(a, d);
  CHECK(grad_A(CMat::Zero(5, 5), c, d).norm() == 0.0);

  for (std::uint64_t s = 0; s < 100; ++s) {
    const int n = 2 + static_cast<int>(s % 5);
    const SkewHermitianParam ar = random_A(n, 1000 + s);
    const UnitaryDiag dr = random_theta(n, 2000 + s);
    const CayleyCache cc = build_unitary(ar, dr);
    const CMat g = grad_A(random_cmat(n, 3000 + s), cc, dr);
    CHECK((g + g.adjoint()).norm() < 1e-12 * std::max(1.0, g.norm()));
  }
}

TEST_CASE("grad_A scalar hand case") {
  // n=1, A=[[iy]]: Re W = (1-y^2)/(1+y^2), d/dy at y=1 is -1.
  SkewHermitianParam a = SkewHermitianParam::zero(1);
  a.y_lower[0] = 1.0;
  UnitaryDiag d{RVec::Zero(1)};
  const CayleyCache c = build_unitary(a, d);
  CMat dLdW(1, 1);
  dLdW(0, 0) = Complex(0.5, 0.0);  // L = Re(W)
  const RVec gy = pack_y_gradient(grad_A(dLdW, c, d));
  CHECK(gy[0] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("grad_A matches finite differences through the packed triangles") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const int n = 3 + static_cast<int>(s % 4);
    SkewHermitianParam a = random_A(n, 4000 + s);
    const UnitaryDiag d = random_theta(n, 5000 + s);
    const CMat g0 = random_cmat(n, 6000 + s);

    const CayleyCache c = build_unitary(a, d);
    const CMat ga = grad_A(0.5 * g0.conjugate(), c, d);
    const RVec gx = pack_x_gradient(ga);
    const RVec gy = pack_y_gradient(ga);

    const double h = 1e-6;
    const auto fd = [&](double* slot) {
      const double orig = *slot;
      *slot = orig + h;
      const double lp = loss_of(g0, a, d);
      *slot = orig - h;
      const double lm = loss_of(g0, a, d);
      *slot = orig;
      return (lp - lm) / (2.0 * h);
    };
    for (Eigen::Index i = 0; i < gx.size(); ++i) {
      CHECK(gx[i] == doctest::Approx(fd(a.x_lower.data() + i)).epsilon(1e-6));
    }
    for (Eigen::Index i = 0; i < gy.size(); ++i) {
      CHECK(gy[i] == doctest::Approx(fd(a.y_lower.data() + i)).epsilon(1e-6));
    }
  }
}

TEST_CASE("grad_theta hand case and finite differences") {
  // n=1, A=0: W = e^{i theta}; with L = Im(W), dL/dtheta = cos(theta).
  SkewHermitianParam a0 = SkewHermitianParam::zero(1);
  UnitaryDiag d0{RVec::Zero(1)};
  CMat dLdW(1, 1);
  dLdW(0, 0) = Complex(0.0, -0.5);  // L = Im(W)
  const RVec gt0 = grad_theta(dLdW, build_unitary(a0, d0), d0);
  CHECK(gt0[0] == doctest::Approx(1.0).epsilon(1e-12));

  for (std::uint64_t s = 0; s < 8; ++s) {
    const int n = 3 + static_cast<int>(s % 4);
    const SkewHermitianParam a = random_A(n, 7000 + s);
    UnitaryDiag d = random_theta(n, 8000 + s);
    const CMat g0 = random_cmat(n, 9000 + s);
    const RVec gt =
        grad_theta(0.5 * g0.conjugate(), build_unitary(a, d), d);
    const double h = 1e-6;
    for (int j = 0; j < n; ++j) {
      const double orig = d.theta[j];
      d.theta[j] = orig + h;
      const double lp = loss_of(g0, a, d);
      d.theta[j] = orig - h;
      const double lm = loss_of(g0, a, d);
      d.theta[j] = orig;
      CHECK(gt[j] == doctest::Approx((lp - lm) / (2.0 * h)).epsilon(1e-6));
    }
  }
}

TEST_CASE("pack helpers") {
  const CMat g = grad_A(random_cmat(4, 1), build_unitary(random_A(4, 2), random_theta(4, 3)),
                        random_theta(4, 3));
  const RVec ux = pack_x_update(g);
  const RVec gx = pack_x_gradient(g);
  CHECK((gx - 2.0 * ux).norm() == 0.0);
  const RVec uy = pack_y_update(g);
  const RVec gy = pack_y_gradient(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) {
      const Eigen::Index idx = SkewHermitianParam::y_index(i, j);
      CHECK(uy[idx] == g(i, j).imag());
      CHECK(gy[idx] == (i == j ? g(i, j).imag() : 2.0 * g(i, j).imag()));
    }
}

TEST_CASE("init_A structure") {
  CHECK(init_A(1, 9).x_lower.size() == 0);
  CHECK(init_A(1, 9).y_lower.norm() == 0.0);

  for (int n : {2, 5, 8}) {
    const SkewHermitianParam a = init_A(n, 123);
    CHECK(a.y_lower.norm() == 0.0);  // Y = 0
    const RMat x = a.x_matrix();
    CHECK((x + x.transpose()).cwiseAbs().maxCoeff() == 0.0);
    // exactly floor(n/2) rotation blocks on the first subdiagonal
    int nonzero = 0;
    for (Eigen::Index i = 0; i < a.x_lower.size(); ++i) {
      if (a.x_lower[i] != 0.0) ++nonzero;
    }
    CHECK(nonzero == n / 2);
    for (int k = 0; k + 1 < n; k += 2) {
      const double s = -a.x_lower[SkewHermitianParam::x_index(k + 1, k)];
      CHECK(s >= 0.0);
      CHECK(s < 1.0);  // t ~ U[0, pi/2) keeps s = sqrt((1-cos)/(1+cos)) < 1
    }
  }
  // deterministic in the seed
  CHECK((init_A(6, 7).x_lower - init_A(6, 7).x_lower).norm() == 0.0);
  CHECK((init_A(6, 7).x_lower - init_A(6, 8).x_lower).norm() > 0.0);
}

TEST_CASE("init_theta range and distribution") {
  const UnitaryDiag d = init_theta(20000, 99);
  CHECK(d.theta.minCoeff() >= 0.0);
  CHECK(d.theta.maxCoeff() < 2.0 * M_PI);
  Complex mean(0, 0);
  for (Eigen::Index j = 0; j < d.theta.size(); ++j) {
    mean += std::polar(1.0, d.theta[j]);
  }
  mean /= static_cast<double>(d.theta.size());
  CHECK(std::abs(mean) < 0.05);  // uniform on the circle
  CHECK((init_theta(8, 3).theta - init_theta(8, 3).theta).norm() == 0.0);
  CHECK((init_theta(8, 3).theta - init_theta(8, 4).theta).norm() > 0.0);
}
