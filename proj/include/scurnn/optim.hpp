#pragma once
#include <string>

#include "scurnn/cayley.hpp"

namespace scurnn {

enum class OptKind { sgd, rmsprop, adam, adagrad };

OptKind opt_kind_from_string(const std::string& s);
std::string opt_kind_to_string(OptKind k);

struct OptHyper {
  double beta1 = 0.9;       // adam
  double beta2 = 0.999;     // adam
  double adam_eps = 1e-8;
  double rms_decay = 0.9;
  double rms_eps = 1e-10;
  double ada_eps = 1e-8;
};

// One optimizer slot per parameter tensor (flattened). Accumulators are
// sized on first step.
class Optimizer {
 public:
  Optimizer() = default;
  Optimizer(OptKind kind, double lr, OptHyper hp = {});

  void step(Eigen::Ref<RVec> param, const RVec& grad);

  OptKind kind() const { return kind_; }
  double lr() const { return lr_; }

  // Serialized accumulator access (for checkpointing, unused in tests).
  const RVec& first_moment() const { return m_; }
  const RVec& second_moment() const { return v_; }

 private:
  OptKind kind_ = OptKind::sgd;
  double lr_ = 0.0;
  OptHyper hp_;
  RVec m_, v_;
  long t_ = 0;
};

// Updates the packed triangles of A from the skew-Hermitian dL/dAbar,
// real and imaginary components through separate accumulators. The gradient
// is rejected if it is not skew-Hermitian to 1e-10 (relative).
class AOptimizer {
 public:
  AOptimizer() = default;
  AOptimizer(OptKind kind, double lr, OptHyper hp = {})
      : opt_x_(kind, lr, hp), opt_y_(kind, lr, hp) {}

  void step(SkewHermitianParam& a, const CMat& grad_a_bar);

 private:
  Optimizer opt_x_, opt_y_;
};

// theta step; D is reformed lazily at the next build_unitary.
void step_theta(UnitaryDiag& d, const RVec& grad, Optimizer& opt);

}  // namespace scurnn
