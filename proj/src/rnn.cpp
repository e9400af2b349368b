#include "scurnn/rnn.hpp"

#include <random>
#include <sstream>

namespace scurnn {

ScuRnnParams ScuRnnParams::init(int n, int m, int p, std::uint64_t seed,
                                double h0_range) {
  ScuRnnParams params;
  params.n = n;
  params.m = m;
  params.p = p;
  params.a = init_A(n, seed);
  params.theta = init_theta(n, seed + 1);

  std::mt19937_64 rng(seed + 2);
  const double ulim = std::sqrt(6.0 / (n + m));
  const double vlim = std::sqrt(6.0 / (p + 2 * n));
  std::uniform_real_distribution<double> udist(-ulim, ulim);
  std::uniform_real_distribution<double> vdist(-vlim, vlim);
  std::uniform_real_distribution<double> small(-0.01, 0.01);
  std::uniform_real_distribution<double> h0dist(-h0_range, h0_range);

  params.u_re = RMat::NullaryExpr(n, m, [&]() { return udist(rng); });
  params.u_im = RMat::NullaryExpr(n, m, [&]() { return udist(rng); });
  params.v = RMat::NullaryExpr(p, 2 * n, [&]() { return vdist(rng); });
  params.b = RVec::NullaryExpr(n, [&]() { return small(rng); });
  params.c = RVec::Zero(p);
  params.h0_re = RVec::NullaryExpr(n, [&]() { return h0dist(rng); });
  params.h0_im = RVec::NullaryExpr(n, [&]() { return h0dist(rng); });
  return params;
}

GradientSet GradientSet::zero(int n, int m, int p) {
  GradientSet g;
  g.dLdW = CMat::Zero(n, n);
  g.dLdU_re = RMat::Zero(n, m);
  g.dLdU_im = RMat::Zero(n, m);
  g.dLdV = RMat::Zero(p, 2 * n);
  g.dLdb = RVec::Zero(n);
  g.dLdc = RVec::Zero(p);
  g.dLdh0_re = RVec::Zero(n);
  g.dLdh0_im = RVec::Zero(n);
  return g;
}

GradientSet& GradientSet::operator+=(const GradientSet& o) {
  dLdW += o.dLdW;
  dLdU_re += o.dLdU_re;
  dLdU_im += o.dLdU_im;
  dLdV += o.dLdV;
  dLdb += o.dLdb;
  dLdc += o.dLdc;
  dLdh0_re += o.dLdh0_re;
  dLdh0_im += o.dLdh0_im;
  return *this;
}

ForwardTape forward(const ScuRnnParams& params, const CayleyCache& cache,
                    const std::vector<RMat>& x_seq) {
  const int n = params.n;
  const auto tau = x_seq.size();
  if (tau == 0) throw DimensionError("forward: empty input sequence");
  const Eigen::Index batch = x_seq[0].cols();

  ForwardTape tape;
  tape.batch = static_cast<int>(batch);
  tape.x = x_seq;
  tape.z.reserve(tau);
  tape.h.reserve(tau);
  tape.y.reserve(tau);

  const Complex iu(0.0, 1.0);
  tape.h0 = (params.h0_re.cast<Complex>() + iu * params.h0_im.cast<Complex>())
                .eval()
                .replicate(1, batch);
  const CMat u = params.u_re.cast<Complex>() + iu * params.u_im.cast<Complex>();

  CMat h_prev = tape.h0;
  for (std::size_t t = 0; t < tau; ++t) {
    if (x_seq[t].rows() != params.m || x_seq[t].cols() != batch) {
      throw DimensionError("forward: input shape mismatch at t=" +
                           std::to_string(t));
    }
    CMat z = u * x_seq[t].cast<Complex>();
    z.noalias() += cache.w * h_prev;

    CMat h(n, batch);
    for (Eigen::Index s = 0; s < batch; ++s) {
      for (int j = 0; j < n; ++j) {
        h(j, s) = modrelu_approx(z(j, s), params.b[j]);
      }
    }
    if (!h.allFinite()) {
      const SingularityReport rep = singularity_probe(z, params.b, 100.0);
      std::ostringstream msg;
      msg << "forward: non-finite hidden state at t=" << t
          << " (max |dsigma/dzbar|=" << rep.max_dzbar
          << ", flagged units=" << rep.flagged_units << ")";
      throw NumericFault(msg.str(), static_cast<int>(t));
    }

    RMat hcat(2 * n, batch);
    hcat.topRows(n) = h.real();
    hcat.bottomRows(n) = h.imag();
    RMat y = params.v * hcat;
    y.colwise() += params.c;

    tape.z.push_back(std::move(z));
    tape.h.push_back(std::move(h));
    tape.y.push_back(std::move(y));
    h_prev = tape.h.back();
  }
  return tape;
}

GradientSet backward(const ForwardTape& tape, const ScuRnnParams& params,
                     const CayleyCache& cache,
                     const std::vector<RMat>& dLdy_seq) {
  const int n = params.n;
  const auto tau = tape.z.size();
  if (dLdy_seq.size() != tau) {
    throw DimensionError("backward: dLdy_seq length != tape length");
  }
  if (tape.x.size() != tau || tape.h.size() != tau) {
    throw DimensionError("backward: tape inconsistent with itself");
  }
  const Eigen::Index batch = tape.batch;

  GradientSet g = GradientSet::zero(n, params.m, params.p);
  CMat dLdU_c = CMat::Zero(n, params.m);
  const auto vl = params.v.leftCols(n);   // p x n, acts on Re h
  const auto vr = params.v.rightCols(n);  // p x n, acts on Im h

  // carry = W^T dL/dz_{t+1}, the unconjugated derivative wrt h_t from the
  // future of the sequence.
  CMat carry = CMat::Zero(n, batch);
  const Complex iu(0.0, 1.0);

  for (std::size_t ti = tau; ti-- > 0;) {
    const RMat& gy = dLdy_seq[ti];
    if (gy.rows() != params.p || gy.cols() != batch) {
      throw DimensionError("backward: dLdy shape mismatch at t=" +
                           std::to_string(ti));
    }
    const CMat& h = tape.h[ti];
    RMat hcat(2 * n, batch);
    hcat.topRows(n) = h.real();
    hcat.bottomRows(n) = h.imag();
    g.dLdV.noalias() += gy * hcat.transpose();
    g.dLdc += gy.rowwise().sum();

    // dL/dh_t (unconjugated): head contribution plus the carried term.
    const RMat gh_re = vl.transpose() * gy;
    const RMat gh_im = vr.transpose() * gy;
    CMat gh = 0.5 * (gh_re.cast<Complex>() - iu * gh_im.cast<Complex>());
    gh += carry;

    // Through the activation: dL/dz = gh * s_z + conj(gh) * conj(s_zbar),
    // and the bias picks up 2 Re(gh * dsigma/db).
    const CMat& z = tape.z[ti];
    CMat gz(n, batch);
    for (Eigen::Index s = 0; s < batch; ++s) {
      for (int j = 0; j < n; ++j) {
        const WirtingerPair d = modrelu_approx_wirtinger(z(j, s), params.b[j]);
        gz(j, s) = gh(j, s) * d.d_dz + std::conj(gh(j, s) * d.d_dzbar);
        g.dLdb[j] += 2.0 * std::real(gh(j, s) *
                                     modrelu_approx_bias_grad(z(j, s), params.b[j]));
      }
    }

    const CMat& h_prev = (ti == 0) ? tape.h0 : tape.h[ti - 1];
    g.dLdW.noalias() += gz * h_prev.transpose();
    dLdU_c.noalias() += gz * tape.x[ti].transpose().cast<Complex>();
    carry.noalias() = cache.w.transpose() * gz;
  }

  g.dLdU_re = 2.0 * dLdU_c.real();
  g.dLdU_im = -2.0 * dLdU_c.imag();
  const CVec gh0 = carry.rowwise().sum();
  g.dLdh0_re = 2.0 * gh0.real();
  g.dLdh0_im = -2.0 * gh0.imag();
  return g;
}

HeadResult cross_entropy_head(const std::vector<RMat>& y_seq,
                              const Eigen::MatrixXi& labels, bool last_only) {
  if (y_seq.empty()) throw DimensionError("cross_entropy_head: empty sequence");
  const Eigen::Index tau = static_cast<Eigen::Index>(y_seq.size());
  const Eigen::Index p = y_seq[0].rows();
  const Eigen::Index batch = y_seq[0].cols();
  const Eigen::Index t_begin = last_only ? tau - 1 : 0;
  const double denom =
      static_cast<double>(batch) * (last_only ? 1.0 : static_cast<double>(tau));

  HeadResult res;
  res.dLdy.assign(y_seq.size(), RMat::Zero(p, batch));
  for (Eigen::Index t = t_begin; t < tau; ++t) {
    const Eigen::Index lrow = last_only ? 0 : t;
    for (Eigen::Index s = 0; s < batch; ++s) {
      const int label = labels(lrow, s);
      if (label < 0 || label >= p) {
        throw DimensionError("cross_entropy_head: label out of range");
      }
      const auto logits = y_seq[t].col(s);
      const double mx = logits.maxCoeff();
      const RVec ex = (logits.array() - mx).exp();
      const double sum = ex.sum();
      res.loss += (std::log(sum) - (logits[label] - mx)) / denom;
      res.dLdy[t].col(s) = ex / (sum * denom);
      res.dLdy[t](label, s) -= 1.0 / denom;
    }
  }
  return res;
}

HeadResult mse_head(const std::vector<RMat>& y_seq,
                    const std::vector<RMat>& targets,
                    const std::vector<RMat>& mask) {
  if (targets.size() != y_seq.size() || mask.size() != y_seq.size()) {
    throw DimensionError("mse_head: sequence length mismatch");
  }
  double count = 0.0;
  for (const auto& mk : mask) count += mk.sum();
  if (count == 0.0) throw DimensionError("mse_head: empty mask");

  HeadResult res;
  res.dLdy.reserve(y_seq.size());
  for (std::size_t t = 0; t < y_seq.size(); ++t) {
    const RMat diff = (y_seq[t] - targets[t]).cwiseProduct(mask[t]);
    res.loss += diff.squaredNorm() / count;
    res.dLdy.push_back(2.0 * diff / count);
  }
  return res;
}

SingularityReport probe_tape(const ForwardTape& tape, const RVec& b,
                             double threshold) {
  SingularityReport rep;
  for (const CMat& z : tape.z) {
    const SingularityReport r = singularity_probe(z, b, threshold);
    rep.max_dzbar = std::max(rep.max_dzbar, r.max_dzbar);
    rep.flagged_units = std::max(rep.flagged_units, r.flagged_units);
  }
  return rep;
}

}  // namespace scurnn
