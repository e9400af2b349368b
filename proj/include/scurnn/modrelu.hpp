#pragma once
#include "scurnn/linalg.hpp"

namespace scurnn {

// Smoothing constant of the approximate modReLU.
inline constexpr double kModReluEps = 1e-5;

struct WirtingerPair {
  Complex d_dz;
  Complex d_dzbar;
};

// zhat = sqrt(x^2 + y^2 + eps), the smoothed modulus.
inline double modrelu_zhat(Complex z) {
  return std::sqrt(std::norm(z) + kModReluEps);
}

// Approximate modReLU: z * ReLU(zhat + b) / (zhat + eps).
// Exactly zero on the inactive branch zhat + b < 0.
Complex modrelu_approx(Complex z, double b);

// Wirtinger derivatives of modrelu_approx. The branch boundary
// zhat + b = 0 takes the active-branch value.
WirtingerPair modrelu_approx_wirtinger(Complex z, double b);

// d/db of modrelu_approx (b is a real parameter): z/(zhat+eps) when active.
Complex modrelu_approx_bias_grad(Complex z, double b);

// Exact modReLU: (|z|+b) z/|z| when |z|+b >= 0, else 0. Returns 0 at z=0
// (the function is discontinuous there when b > 0).
Complex modrelu_exact(Complex z, double b);

// Wirtinger derivatives of the exact modReLU. Throws SingularMatrixError-like
// NumericFault at z = 0 on the active branch, where the derivatives blow up.
WirtingerPair modrelu_exact_wirtinger(Complex z, double b);

struct SingularityReport {
  double max_dzbar = 0.0;  // max |dsigma/dzbar| over all units and samples
  int flagged_units = 0;   // units where b/(zhat+eps) exceeds the threshold
};

// Diagnostic over a batch of pre-activations (n units x B samples).
// A unit is flagged when its bias dominates the smoothed modulus for some
// sample, i.e. b_j / (zhat + eps) > threshold, the regime where the
// derivative becomes very large.
SingularityReport singularity_probe(const CMat& z_batch, const RVec& b,
                                    double threshold);

}  // namespace scurnn
