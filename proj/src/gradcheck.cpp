#include "scurnn/gradcheck.hpp"

#include <random>

namespace scurnn {

double GradCheckReport::worst() const {
  double w = 0.0;
  for (const auto& [name, err] : groups) w = std::max(w, err);
  return w;
}

namespace {

double rel_err(const RVec& analytic, const RVec& fd) {
  const double scale =
      std::max({analytic.cwiseAbs().maxCoeff(), fd.cwiseAbs().maxCoeff(), 1e-12});
  return (analytic - fd).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

GradCheckReport run_gradcheck(int n, int tau, std::uint64_t seed,
                              double fd_step) {
  const int m = 2, p = 2;
  ScuRnnParams params = ScuRnnParams::init(n, m, p, seed);

  // Densify A so both triangles get exercised (init_A leaves Y = 0).
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::normal_distribution<double> gauss(0.0, 0.3);
  for (Eigen::Index i = 0; i < params.a.x_lower.size(); ++i) {
    params.a.x_lower[i] = gauss(rng);
  }
  for (Eigen::Index i = 0; i < params.a.y_lower.size(); ++i) {
    params.a.y_lower[i] = gauss(rng);
  }
  std::uniform_real_distribution<double> bdist(-0.4, 0.4);
  for (int j = 0; j < n; ++j) params.b[j] = bdist(rng);

  std::uniform_real_distribution<double> xin(-1.0, 1.0);
  std::vector<RMat> x_seq(tau);
  std::vector<RMat> targets(tau), mask(tau);
  for (int t = 0; t < tau; ++t) {
    x_seq[t] = RMat::NullaryExpr(m, 1, [&]() { return xin(rng); });
    targets[t] = RMat::NullaryExpr(p, 1, [&]() { return xin(rng); });
    mask[t] = RMat::Ones(p, 1);
  }

  const auto loss_of = [&](const ScuRnnParams& pr) {
    const CayleyCache cache = build_unitary(pr.a, pr.theta);
    const ForwardTape tape = forward(pr, cache, x_seq);
    return mse_head(tape.y, targets, mask).loss;
  };

  // Analytic gradients.
  const CayleyCache cache = build_unitary(params.a, params.theta);
  const ForwardTape tape = forward(params, cache, x_seq);
  const HeadResult head = mse_head(tape.y, targets, mask);
  const GradientSet g = backward(tape, params, cache, head.dLdy);
  const CMat ga = grad_A(g.dLdW, cache, params.theta);
  const RVec grad_x = pack_x_gradient(ga);
  const RVec grad_y = pack_y_gradient(ga);
  const RVec grad_th = grad_theta(g.dLdW, cache, params.theta);

  const auto fd_on = [&](double* slot) {
    const double orig = *slot;
    *slot = orig + fd_step;
    const double lp = loss_of(params);
    *slot = orig - fd_step;
    const double lm = loss_of(params);
    *slot = orig;
    return (lp - lm) / (2.0 * fd_step);
  };
  const auto fd_vec = [&](double* base, Eigen::Index count) {
    RVec out(count);
    for (Eigen::Index i = 0; i < count; ++i) out[i] = fd_on(base + i);
    return out;
  };

  GradCheckReport rep;
  rep.groups.emplace_back(
      "X", rel_err(grad_x, fd_vec(params.a.x_lower.data(), grad_x.size())));
  rep.groups.emplace_back(
      "Y", rel_err(grad_y, fd_vec(params.a.y_lower.data(), grad_y.size())));
  rep.groups.emplace_back(
      "theta", rel_err(grad_th, fd_vec(params.theta.theta.data(), n)));
  const auto flat = [](const RMat& mt) {
    return Eigen::Map<const RVec>(mt.data(), mt.size()).eval();
  };
  rep.groups.emplace_back(
      "U_re",
      rel_err(flat(g.dLdU_re), fd_vec(params.u_re.data(), params.u_re.size())));
  rep.groups.emplace_back(
      "U_im",
      rel_err(flat(g.dLdU_im), fd_vec(params.u_im.data(), params.u_im.size())));
  rep.groups.emplace_back(
      "V", rel_err(flat(g.dLdV), fd_vec(params.v.data(), params.v.size())));
  rep.groups.emplace_back("b", rel_err(g.dLdb, fd_vec(params.b.data(), n)));
  rep.groups.emplace_back("c", rel_err(g.dLdc, fd_vec(params.c.data(), p)));
  rep.groups.emplace_back("h0_re",
                          rel_err(g.dLdh0_re, fd_vec(params.h0_re.data(), n)));
  rep.groups.emplace_back("h0_im",
                          rel_err(g.dLdh0_im, fd_vec(params.h0_im.data(), n)));
  return rep;
}

}  // namespace scurnn
