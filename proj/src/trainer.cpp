#include "scurnn/trainer.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numeric>
#include <random>
#include <thread>

namespace scurnn {

namespace {

namespace fs = std::filesystem;

struct TaskDims {
  int m, p, tau;
};

TaskDims task_dims(const TrainConfig& cfg) {
  if (cfg.task == "copying") return {10, 9, cfg.T + 20};
  if (cfg.task == "adding") return {2, 1, cfg.T};
  return {1, 10, 784};  // mnist / mnist_permuted
}

struct ChunkResult {
  double loss = 0.0;
  GradientSet grads;
  SingularityReport probe;
};

using ChunkFn = std::function<ChunkResult(int lo, int hi)>;

// Splits [0, batch) into `threads` contiguous chunks and sums the results in
// chunk order, so the reduction is deterministic for a fixed thread count.
ChunkResult run_parallel(const ChunkFn& fn, int batch, int threads, int n,
                         int m, int p) {
  const int nchunks = std::max(1, std::min(threads, batch));
  std::vector<ChunkResult> results(nchunks);
  std::vector<std::exception_ptr> errors(nchunks);
  auto work = [&](int c) {
    const int lo = batch * c / nchunks;
    const int hi = batch * (c + 1) / nchunks;
    try {
      results[c] = fn(lo, hi);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (nchunks == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nchunks);
    for (int c = 0; c < nchunks; ++c) pool.emplace_back(work, c);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ChunkResult total;
  total.grads = GradientSet::zero(n, m, p);
  for (const auto& r : results) {
    total.loss += r.loss;
    total.grads += r.grads;
    total.probe.max_dzbar = std::max(total.probe.max_dzbar, r.probe.max_dzbar);
    total.probe.flagged_units =
        std::max(total.probe.flagged_units, r.probe.flagged_units);
  }
  return total;
}

// Per-parameter-group optimizer bundle.
struct Optimizers {
  AOptimizer a;
  Optimizer theta;
  Optimizer u_re, u_im, v, b, c, h0_re, h0_im;

  explicit Optimizers(const TrainConfig& cfg)
      : a(cfg.opt_a.kind, cfg.opt_a.lr),
        theta(cfg.opt_d.kind, cfg.opt_d.lr),
        u_re(cfg.opt_other.kind, cfg.opt_other.lr),
        u_im(cfg.opt_other.kind, cfg.opt_other.lr),
        v(cfg.opt_other.kind, cfg.opt_other.lr),
        b(cfg.opt_other.kind, cfg.opt_other.lr),
        c(cfg.opt_other.kind, cfg.opt_other.lr),
        h0_re(cfg.opt_other.kind, cfg.opt_other.lr),
        h0_im(cfg.opt_other.kind, cfg.opt_other.lr) {}

  void step_dense(ScuRnnParams& params, const GradientSet& g) {
    auto stepm = [](Optimizer& opt, RMat& pm, const RMat& gm) {
      Eigen::Map<RVec> pv(pm.data(), pm.size());
      opt.step(pv, Eigen::Map<const RVec>(gm.data(), gm.size()));
    };
    stepm(u_re, params.u_re, g.dLdU_re);
    stepm(u_im, params.u_im, g.dLdU_im);
    stepm(v, params.v, g.dLdV);
    b.step(params.b, g.dLdb);
    c.step(params.c, g.dLdc);
    h0_re.step(params.h0_re, g.dLdh0_re);
    h0_im.step(params.h0_im, g.dLdh0_im);
  }
};

struct TaskData {
  // copying
  CopyingBatch copy_eval;
  // adding
  AddingBatch add_train, add_test;
  // mnist
  MnistDataset mnist_train, mnist_test;
  std::vector<int> train_rows;  // mnist row order, reshuffled per epoch
  int n_train = 0, n_eval = 0;
  int iters_per_epoch = 0, total_iters = 0;
  double baseline = 0.0;
};

TaskData prepare_task(const TrainConfig& cfg) {
  TaskData td;
  if (cfg.task == "copying") {
    td.n_eval = cfg.test_limit > 0 ? cfg.test_limit : 512;
    td.copy_eval = gen_copying(cfg.T, td.n_eval, cfg.data_seed);
    td.total_iters = cfg.iters;
    td.baseline = copying_baseline(cfg.T);
  } else if (cfg.task == "adding") {
    td.n_train = cfg.train_limit > 0 ? cfg.train_limit : 100000;
    td.n_eval = cfg.test_limit > 0 ? cfg.test_limit : 10000;
    td.add_train = gen_adding(cfg.T, td.n_train, cfg.data_seed);
    td.add_test = gen_adding(cfg.T, td.n_eval, cfg.data_seed + 1);
    td.iters_per_epoch = td.n_train / cfg.batch;
    td.total_iters = cfg.epochs * td.iters_per_epoch;
    td.baseline = 0.167;
  } else {
    const auto perm = cfg.task == "mnist_permuted"
                          ? cfg.permute_seed
                          : std::optional<std::uint64_t>{};
    if (cfg.task == "mnist_permuted" && !cfg.permute_seed) {
      throw ConfigError("mnist_permuted requires permute_seed");
    }
    td.mnist_train = load_mnist(cfg.data_dir + "/train-images-idx3-ubyte",
                                cfg.data_dir + "/train-labels-idx1-ubyte", perm);
    td.mnist_test = load_mnist(cfg.data_dir + "/t10k-images-idx3-ubyte",
                               cfg.data_dir + "/t10k-labels-idx1-ubyte", perm);
    const int avail = static_cast<int>(td.mnist_train.pixels.rows());
    td.n_train = std::min(cfg.train_limit > 0 ? cfg.train_limit : 55000, avail);
    td.n_eval = std::min(cfg.test_limit > 0 ? cfg.test_limit : 10000,
                         static_cast<int>(td.mnist_test.pixels.rows()));
    td.iters_per_epoch = td.n_train / cfg.batch;
    td.total_iters = cfg.epochs * td.iters_per_epoch;
    td.train_rows.resize(td.n_train);
    std::iota(td.train_rows.begin(), td.train_rows.end(), 0);
    td.baseline = 0.1;  // chance accuracy
  }
  return td;
}

ChunkResult train_chunk(const ScuRnnParams& params, const CayleyCache& cache,
                        const std::vector<RMat>& x_seq,
                        const std::function<HeadResult(const ForwardTape&)>& head,
                        double weight, double probe_threshold) {
  ChunkResult res;
  const ForwardTape tape = forward(params, cache, x_seq);
  HeadResult hr = head(tape);
  res.loss = hr.loss * weight;
  for (auto& gy : hr.dLdy) gy *= weight;
  res.grads = backward(tape, params, cache, hr.dLdy);
  res.probe = probe_tape(tape, params.b, probe_threshold);
  return res;
}

// Forward-only evaluation; returns the metric (mean CE / MSE, or accuracy).
double evaluate(const ScuRnnParams& params, const CayleyCache& cache,
                const TrainConfig& cfg, const TaskData& td, int limit) {
  const int total = std::min(limit, td.n_eval);
  double sum = 0.0;
  for (int lo = 0; lo < total; lo += cfg.batch) {
    const int hi = std::min(lo + cfg.batch, total);
    if (cfg.task == "copying") {
      const auto x = copying_inputs(td.copy_eval, lo, hi);
      const auto labels = copying_labels(td.copy_eval, lo, hi);
      const ForwardTape tape = forward(params, cache, x);
      sum += cross_entropy_head(tape.y, labels, false).loss * (hi - lo);
    } else if (cfg.task == "adding") {
      const auto x = adding_inputs(td.add_test, lo, hi);
      std::vector<RMat> targets, mask;
      adding_targets(td.add_test, lo, hi, cfg.T, targets, mask);
      const ForwardTape tape = forward(params, cache, x);
      sum += mse_head(tape.y, targets, mask).loss * (hi - lo);
    } else {
      std::vector<int> rows(hi - lo);
      std::iota(rows.begin(), rows.end(), lo);
      const auto x = mnist_inputs(td.mnist_test, rows);
      const ForwardTape tape = forward(params, cache, x);
      const RMat& logits = tape.y.back();
      for (int s = 0; s < hi - lo; ++s) {
        Eigen::Index best;
        logits.col(s).maxCoeff(&best);
        if (best == td.mnist_test.labels[lo + s]) sum += 1.0;
      }
    }
  }
  return sum / total;
}

}  // namespace

TrainOutcome run_train(const TrainConfig& cfg) {
  TrainOutcome out;
  try {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    {
      std::ofstream echo(cfg.out_dir + "/config.json");
      echo << config_to_json(cfg) << "\n";
      if (!echo) throw IoError("cannot write config echo in " + cfg.out_dir);
    }

    const TaskDims dims = task_dims(cfg);
    TaskData td = prepare_task(cfg);
    ScuRnnParams params =
        ScuRnnParams::init(cfg.hidden, dims.m, dims.p, cfg.seed, cfg.h0_range);
    Optimizers opts(cfg);

    std::ofstream csv(cfg.out_dir + "/metrics.csv");
    csv << "step,train_loss,eval_metric,baseline,unitarity_error,max_dzbar,"
           "flagged_units,wall_seconds\n";
    csv << std::setprecision(12);

    const auto t0 = std::chrono::steady_clock::now();
    const auto wall = [&]() {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                           t0)
          .count();
    };

    const bool metric_is_accuracy = cfg.task.rfind("mnist", 0) == 0;
    for (int iter = 0; iter < td.total_iters; ++iter) {
      const CayleyCache cache = build_unitary(params.a, params.theta);

      ChunkFn chunk;
      if (cfg.task == "copying") {
        // fresh online batch each iteration
        auto batch = std::make_shared<CopyingBatch>(
            gen_copying(cfg.T, cfg.batch, cfg.data_seed + 1000 + iter));
        chunk = [&, batch](int lo, int hi) {
          const auto x = copying_inputs(*batch, lo, hi);
          const auto labels = copying_labels(*batch, lo, hi);
          return train_chunk(
              params, cache, x,
              [&](const ForwardTape& tape) {
                return cross_entropy_head(tape.y, labels, false);
              },
              double(hi - lo) / cfg.batch, cfg.probe_threshold);
        };
      } else if (cfg.task == "adding") {
        const int base = (iter % td.iters_per_epoch) * cfg.batch;
        chunk = [&, base](int lo, int hi) {
          const auto x = adding_inputs(td.add_train, base + lo, base + hi);
          std::vector<RMat> targets, mask;
          adding_targets(td.add_train, base + lo, base + hi, cfg.T, targets,
                         mask);
          return train_chunk(
              params, cache, x,
              [&](const ForwardTape& tape) {
                return mse_head(tape.y, targets, mask);
              },
              double(hi - lo) / cfg.batch, cfg.probe_threshold);
        };
      } else {
        if (iter % td.iters_per_epoch == 0) {
          std::mt19937_64 rng(cfg.data_seed * 131 + iter / td.iters_per_epoch);
          std::shuffle(td.train_rows.begin(), td.train_rows.end(), rng);
        }
        const int base = (iter % td.iters_per_epoch) * cfg.batch;
        chunk = [&, base](int lo, int hi) {
          std::vector<int> rows(td.train_rows.begin() + base + lo,
                                td.train_rows.begin() + base + hi);
          const auto x = mnist_inputs(td.mnist_train, rows);
          const auto labels = mnist_labels(td.mnist_train, rows);
          return train_chunk(
              params, cache, x,
              [&](const ForwardTape& tape) {
                return cross_entropy_head(tape.y, labels, true);
              },
              double(hi - lo) / cfg.batch, cfg.probe_threshold);
        };
      }

      const ChunkResult step = run_parallel(chunk, cfg.batch, cfg.threads,
                                            cfg.hidden, dims.m, dims.p);

      const CMat ga = grad_A(step.grads.dLdW, cache, params.theta);
      const RVec gth = grad_theta(step.grads.dLdW, cache, params.theta);
      opts.a.step(params.a, ga);
      step_theta(params.theta, gth, opts.theta);
      opts.step_dense(params, step.grads);
      if (cfg.clamp_b) params.b = params.b.cwiseMin(0.0);

      const bool last = iter + 1 == td.total_iters;
      if ((iter + 1) % cfg.eval_every == 0 || last) {
        const CayleyCache post = build_unitary(params.a, params.theta);
        const int limit = last ? td.n_eval : std::min(td.n_eval, 2048);
        double metric = evaluate(params, post, cfg, td, limit);
        bool stop = false;
        if (!metric_is_accuracy && cfg.stop_below > 0.0 &&
            metric < cfg.stop_below) {
          // confirm on the full eval split before stopping
          metric = evaluate(params, post, cfg, td, td.n_eval);
          stop = metric < cfg.stop_below;
        }
        csv << (iter + 1) << "," << step.loss << "," << metric << ","
            << td.baseline << "," << post.unitarity_error() << ","
            << step.probe.max_dzbar << "," << step.probe.flagged_units << ","
            << wall() << "\n";
        csv.flush();
        out.final_metric = metric;
        out.steps_run = iter + 1;
        if (stop) break;
      }
    }

    save_checkpoint(cfg.out_dir + "/checkpoint.bin", params);
  } catch (const NumericFault& e) {
    out.exit_code = 1;
    out.error = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 2;
    out.error = e.what();
  }
  return out;
}

double run_eval_checkpoint(const std::string& checkpoint_path,
                           const TrainConfig& cfg) {
  cfg.validate();
  const TaskDims dims = task_dims(cfg);
  const ScuRnnParams params = load_checkpoint(checkpoint_path);
  if (params.n != cfg.hidden || params.m != dims.m || params.p != dims.p) {
    throw IoError("checkpoint shape mismatch: expected n=" +
                  std::to_string(cfg.hidden) + " m=" + std::to_string(dims.m) +
                  " p=" + std::to_string(dims.p) + ", got n=" +
                  std::to_string(params.n) + " m=" + std::to_string(params.m) +
                  " p=" + std::to_string(params.p));
  }
  const TaskData td = prepare_task(cfg);
  const CayleyCache cache = build_unitary(params.a, params.theta);
  return evaluate(params, cache, cfg, td, td.n_eval);
}

}  // namespace scurnn
