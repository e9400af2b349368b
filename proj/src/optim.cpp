#include "scurnn/optim.hpp"

namespace scurnn {

OptKind opt_kind_from_string(const std::string& s) {
  if (s == "sgd") return OptKind::sgd;
  if (s == "rmsprop") return OptKind::rmsprop;
  if (s == "adam") return OptKind::adam;
  if (s == "adagrad") return OptKind::adagrad;
  throw ConfigError("unknown optimizer kind: " + s);
}

std::string opt_kind_to_string(OptKind k) {
  switch (k) {
    case OptKind::sgd: return "sgd";
    case OptKind::rmsprop: return "rmsprop";
    case OptKind::adam: return "adam";
    case OptKind::adagrad: return "adagrad";
  }
  return "?";
}

Optimizer::Optimizer(OptKind kind, double lr, OptHyper hp)
    : kind_(kind), lr_(lr), hp_(hp) {
  if (lr <= 0.0) throw ConfigError("optimizer learning rate must be > 0");
}

void Optimizer::step(Eigen::Ref<RVec> param, const RVec& grad) {
  if (param.size() != grad.size()) {
    throw DimensionError("Optimizer::step: parameter/gradient size mismatch");
  }
  switch (kind_) {
    case OptKind::sgd:
      param -= lr_ * grad;
      break;
    case OptKind::rmsprop:
      if (v_.size() == 0) v_ = RVec::Zero(grad.size());
      v_ = hp_.rms_decay * v_ + (1.0 - hp_.rms_decay) * grad.cwiseAbs2();
      param.array() -= lr_ * grad.array() / (v_.array().sqrt() + hp_.rms_eps);
      break;
    case OptKind::adam: {
      if (m_.size() == 0) {
        m_ = RVec::Zero(grad.size());
        v_ = RVec::Zero(grad.size());
      }
      ++t_;
      m_ = hp_.beta1 * m_ + (1.0 - hp_.beta1) * grad;
      v_ = hp_.beta2 * v_ + (1.0 - hp_.beta2) * grad.cwiseAbs2();
      const double bc1 = 1.0 - std::pow(hp_.beta1, t_);
      const double bc2 = 1.0 - std::pow(hp_.beta2, t_);
      param.array() -= lr_ * (m_.array() / bc1) /
                       ((v_.array() / bc2).sqrt() + hp_.adam_eps);
      break;
    }
    case OptKind::adagrad:
      if (v_.size() == 0) v_ = RVec::Zero(grad.size());
      v_ += grad.cwiseAbs2();
      param.array() -= lr_ * grad.array() / (v_.array().sqrt() + hp_.ada_eps);
      break;
  }
}

void AOptimizer::step(SkewHermitianParam& a, const CMat& grad_a_bar) {
  if (grad_a_bar.rows() != a.n || grad_a_bar.cols() != a.n) {
    throw DimensionError("AOptimizer::step: gradient shape mismatch");
  }
  const double dev = (grad_a_bar + grad_a_bar.adjoint()).norm();
  if (dev > 1e-10 * std::max(1.0, grad_a_bar.norm())) {
    throw NumericFault("AOptimizer::step: gradient not skew-Hermitian", -1);
  }
  const RVec gx = pack_x_update(grad_a_bar);
  const RVec gy = pack_y_update(grad_a_bar);
  opt_x_.step(a.x_lower, gx);
  opt_y_.step(a.y_lower, gy);
}

void step_theta(UnitaryDiag& d, const RVec& grad, Optimizer& opt) {
  if (grad.size() != d.theta.size()) {
    throw DimensionError("step_theta: gradient length mismatch");
  }
  opt.step(d.theta, grad);
}

}  // namespace scurnn
