#include "scurnn/modrelu.hpp"

namespace scurnn {

Complex modrelu_approx(Complex z, double b) {
  const double zhat = modrelu_zhat(z);
  if (zhat + b < 0.0) return Complex(0.0, 0.0);
  return z * ((zhat + b) / (zhat + kModReluEps));
}

WirtingerPair modrelu_approx_wirtinger(Complex z, double b) {
  const double zhat = modrelu_zhat(z);
  if (zhat + b < 0.0) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  const double denom = 2.0 * zhat * (zhat + kModReluEps) * (zhat + kModReluEps);
  const double scale = (kModReluEps - b) / denom;
  WirtingerPair out;
  out.d_dz = Complex((zhat + b) / (zhat + kModReluEps) + std::norm(z) * scale, 0.0);
  out.d_dzbar = z * z * scale;
  return out;
}

Complex modrelu_approx_bias_grad(Complex z, double b) {
  const double zhat = modrelu_zhat(z);
  if (zhat + b < 0.0) return Complex(0.0, 0.0);
  return z / (zhat + kModReluEps);
}

Complex modrelu_exact(Complex z, double b) {
  const double r = std::abs(z);
  if (r == 0.0) return Complex(0.0, 0.0);
  if (r + b < 0.0) return Complex(0.0, 0.0);
  return z * ((r + b) / r);
}

WirtingerPair modrelu_exact_wirtinger(Complex z, double b) {
  const double r = std::abs(z);
  if (r + b < 0.0) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  if (r == 0.0) {
    throw NumericFault("modrelu_exact_wirtinger: derivative singular at z = 0", -1);
  }
  WirtingerPair out;
  out.d_dz = Complex(1.0 + b / (2.0 * r), 0.0);
  out.d_dzbar = -b * z * z / (2.0 * r * r * r);
  return out;
}

SingularityReport singularity_probe(const CMat& z_batch, const RVec& b,
                                    double threshold) {
  if (z_batch.rows() != b.size()) {
    throw DimensionError("singularity_probe: unit count mismatch");
  }
  SingularityReport rep;
  for (Eigen::Index j = 0; j < z_batch.rows(); ++j) {
    bool flagged = false;
    for (Eigen::Index s = 0; s < z_batch.cols(); ++s) {
      const Complex z = z_batch(j, s);
      const double zhat = modrelu_zhat(z);
      const WirtingerPair d = modrelu_approx_wirtinger(z, b[j]);
      rep.max_dzbar = std::max(rep.max_dzbar, std::abs(d.d_dzbar));
      if (b[j] / (zhat + kModReluEps) > threshold) flagged = true;
    }
    if (flagged) ++rep.flagged_units;
  }
  return rep;
}

}  // namespace scurnn
