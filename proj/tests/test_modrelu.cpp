#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "scurnn/modrelu.hpp"

using namespace scurnn;

namespace {

// directional finite differences of sigma; the Wirtinger pair predicts
// d/dx = d_dz + d_dzbar and d/dy = i (d_dz - d_dzbar)
Complex fd_x(Complex z, double b, double h = 1e-6) {
  return (modrelu_approx(z + h, b) - modrelu_approx(z - h, b)) / (2.0 * h);
}
Complex fd_y(Complex z, double b, double h = 1e-6) {
  const Complex ih(0, h);
  return (modrelu_approx(z + ih, b) - modrelu_approx(z - ih, b)) / (2.0 * h);
}

}  // namespace

TEST_CASE("approximate modReLU values") {
  CHECK(modrelu_approx(Complex(0, 0), 0.5) == Complex(0, 0));
  CHECK(modrelu_approx(Complex(0.1, 0), -1.0) == Complex(0, 0));  // inactive
  CHECK(modrelu_approx(Complex(1, 0), 0.5).real() ==
        doctest::Approx(1.49999).epsilon(1e-5));
  CHECK(modrelu_approx(Complex(1, 0), 0.5).imag() == 0.0);

  // zero exactly on the whole inactive branch
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex z(u(rng), u(rng));
    const double b = -modrelu_zhat(z) - std::abs(u(rng)) - 1e-9;
    CHECK(modrelu_approx(z, b) == Complex(0, 0));
  }
}

TEST_CASE("approximate modReLU preserves phase") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex z(u(rng), u(rng));
    const Complex s = modrelu_approx(z, 0.5);
    if (std::abs(s) > 1e-12 && std::abs(z) > 1e-12) {
      CHECK(std::abs(s / std::abs(s) - z / std::abs(z)) < 1e-12);
    }
  }
}

TEST_CASE("Wirtinger derivatives match finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uz(-2.0, 2.0);
  std::uniform_real_distribution<double> ub(-1.5, 1.5);
  int tested = 0;
  for (int i = 0; i < 2000; ++i) {
    const Complex z(uz(rng), uz(rng));
    const double b = ub(rng);
    if (std::abs(modrelu_zhat(z) + b) < 1e-3) continue;  // branch boundary
    const WirtingerPair w = modrelu_approx_wirtinger(z, b);
    const Complex dx = w.d_dz + w.d_dzbar;
    const Complex dy = Complex(0, 1) * (w.d_dz - w.d_dzbar);
    const double scale = std::max({std::abs(dx), std::abs(dy), 1.0});
    CHECK(std::abs(dx - fd_x(z, b)) / scale < 1e-5);
    CHECK(std::abs(dy - fd_y(z, b)) / scale < 1e-5);
    ++tested;
  }
  CHECK(tested > 1500);
}

TEST_CASE("derivative near the origin stays finite but large") {
  const WirtingerPair w = modrelu_approx_wirtinger(Complex(0, 0), 1.0);
  CHECK(std::abs(w.d_dz.real() - 316.2) < 1.0);  // (zhat+1)/(zhat+eps), zhat=sqrt(eps)
  CHECK(w.d_dz.imag() == 0.0);
  CHECK(std::abs(w.d_dzbar) == 0.0);

  // inactive branch: all derivatives are exactly zero
  const WirtingerPair wi = modrelu_approx_wirtinger(Complex(0.1, 0), -1.0);
  CHECK(wi.d_dz == Complex(0, 0));
  CHECK(wi.d_dzbar == Complex(0, 0));
}

TEST_CASE("bias gradient matches finite differences") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> uz(-2.0, 2.0);
  std::uniform_real_distribution<double> ub(-1.5, 1.5);
  const double h = 1e-6;
  for (int i = 0; i < 1000; ++i) {
    const Complex z(uz(rng), uz(rng));
    const double b = ub(rng);
    if (std::abs(modrelu_zhat(z) + b) < 1e-3) continue;
    const Complex fd = (modrelu_approx(z, b + h) - modrelu_approx(z, b - h)) / (2.0 * h);
    const Complex an = modrelu_approx_bias_grad(z, b);
    CHECK(std::abs(an - fd) / std::max(std::abs(an), 1.0) < 1e-5);
  }
}

TEST_CASE("derivatives are bounded when the bias is non-positive") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uz(-3.0, 3.0);
  std::uniform_real_distribution<double> ub(-2.0, 0.0);
  for (int i = 0; i < 5000; ++i) {
    const WirtingerPair w =
        modrelu_approx_wirtinger(Complex(uz(rng), uz(rng)), ub(rng));
    CHECK(std::abs(w.d_dz) <= 1.0 + 1e-12);
    CHECK(std::abs(w.d_dzbar) <= 1.0 + 1e-12);
  }
}

TEST_CASE("exact modReLU") {
  CHECK(modrelu_exact(Complex(1, 0), 0.0) == Complex(1, 0));
  CHECK(std::abs(modrelu_exact(Complex(0, 1), 0.5) - Complex(0, 1.5)) < 1e-15);
  CHECK(modrelu_exact(Complex(0.3, 0), -1.0) == Complex(0, 0));
  CHECK(modrelu_exact(Complex(0, 0), 1.0) == Complex(0, 0));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex z(u(rng), u(rng));
    const double b = u(rng);
    const double want = std::max(std::abs(z) + b, 0.0);
    CHECK(std::abs(modrelu_exact(z, b)) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("exact modReLU Wirtinger derivatives") {
  WirtingerPair w = modrelu_exact_wirtinger(Complex(1, 0), 0.0);
  CHECK(std::abs(w.d_dz - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(w.d_dzbar) < 1e-15);

  w = modrelu_exact_wirtinger(Complex(1, 0), 1.0);  // 1 + b/(2|z|), -b z^2/(2|z|^3)
  CHECK(w.d_dz.real() == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(w.d_dzbar.real() == doctest::Approx(-0.5).epsilon(1e-12));

  w = modrelu_exact_wirtinger(Complex(0.5, 0), -1.0);  // inactive
  CHECK(w.d_dz == Complex(0, 0));
  CHECK(w.d_dzbar == Complex(0, 0));

  CHECK_THROWS_AS(modrelu_exact_wirtinger(Complex(0, 0), 1.0), NumericFault);
}

TEST_CASE("singularity probe") {
  // non-positive biases: nothing to flag
  CMat z = CMat::Random(4, 8);
  RVec b = RVec::Constant(4, -0.5);
  CHECK(singularity_probe(z, b, 100.0).flagged_units == 0);

  // unit 2 sits at a tiny pre-activation with a large positive bias
  CMat z2 = CMat::Ones(4, 3);
  z2(2, 1) = Complex(1e-3, 0);
  RVec b2 = RVec::Zero(4);
  b2[2] = 1.0;
  const SingularityReport rep = singularity_probe(z2, b2, 100.0);
  CHECK(rep.flagged_units == 1);
  CHECK(rep.max_dzbar > 10.0);

  // same unit but a bigger threshold: not flagged
  CHECK(singularity_probe(z2, b2, 1e6).flagged_units == 0);
}
