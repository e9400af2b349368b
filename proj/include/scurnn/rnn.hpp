#pragma once
#include <vector>

#include "scurnn/cayley.hpp"
#include "scurnn/modrelu.hpp"

namespace scurnn {

// Full trainable parameter set. The complex input map U is stored as two
// real matrices and the output map V acts on [Re h; Im h].
struct ScuRnnParams {
  int n = 0;  // hidden units
  int m = 0;  // input size
  int p = 0;  // output size

  SkewHermitianParam a;
  UnitaryDiag theta;
  RMat u_re, u_im;    // n x m
  RMat v;             // p x 2n
  RVec b;             // modReLU bias, length n
  RVec c;             // output bias, length p
  RVec h0_re, h0_im;  // trainable initial state, length n

  // A from 2x2 blocks, Y = 0; theta ~ U[0,2pi); U, V Glorot;
  // b, h0 ~ U[-h0_range, h0_range]; c = 0.
  static ScuRnnParams init(int n, int m, int p, std::uint64_t seed,
                           double h0_range = 0.01);
};

// Per-timestep records of one forward pass over a batch (columns are batch
// elements). Inputs are kept so backward needs no extra arguments.
struct ForwardTape {
  std::vector<RMat> x;   // tau entries, m x B
  std::vector<CMat> z;   // pre-activations, n x B
  std::vector<CMat> h;   // hidden states, n x B
  std::vector<RMat> y;   // outputs, p x B
  CMat h0;               // n x B (h0 broadcast over the batch)
  int batch = 0;
};

struct GradientSet {
  CMat dLdW;                 // unconjugated Wirtinger derivative, n x n
  RMat dLdU_re, dLdU_im;     // n x m
  RMat dLdV;                 // p x 2n
  RVec dLdb;                 // n
  RVec dLdc;                 // p
  RVec dLdh0_re, dLdh0_im;   // n

  static GradientSet zero(int n, int m, int p);
  GradientSet& operator+=(const GradientSet& o);
};

// Eq-style recurrence z_t = U x_t + W h_{t-1}, h_t = sigma_eps(z_t),
// y_t = V [Re h_t; Im h_t] + c. Throws NumericFault (with the timestep and a
// singularity report in the message) if a hidden state goes non-finite.
ForwardTape forward(const ScuRnnParams& params, const CayleyCache& cache,
                    const std::vector<RMat>& x_seq);

// Full-sequence BPTT. dLdy_seq holds dL/dy_t (p x B, real). Returns real
// gradients for all dense parameters plus the complex dL/dW consumed by
// grad_A / grad_theta.
GradientSet backward(const ForwardTape& tape, const ScuRnnParams& params,
                     const CayleyCache& cache,
                     const std::vector<RMat>& dLdy_seq);

struct HeadResult {
  double loss = 0.0;
  std::vector<RMat> dLdy;  // same shapes as y_seq
};

// Softmax + categorical cross entropy, averaged over batch. When last_only
// is set only the final timestep is scored (labels is then 1 x B);
// otherwise the loss averages over all timesteps (labels is tau x B).
HeadResult cross_entropy_head(const std::vector<RMat>& y_seq,
                              const Eigen::MatrixXi& labels, bool last_only);

// Mean squared error over unmasked entries. targets/mask mirror the shape of
// y_seq; mask entries are 0 or 1. Throws if the mask is empty.
HeadResult mse_head(const std::vector<RMat>& y_seq,
                    const std::vector<RMat>& targets,
                    const std::vector<RMat>& mask);

// Aggregated singularity probe over every timestep of a tape.
SingularityReport probe_tape(const ForwardTape& tape, const RVec& b,
                             double threshold);

}  // namespace scurnn
