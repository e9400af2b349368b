#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "scurnn/gradcheck.hpp"
#include "scurnn/trainer.hpp"

namespace {

using scurnn::TrainConfig;

// Flags override values from --config (flags win).
void add_common_options(CLI::App* cmd, TrainConfig& cfg, std::string& cfg_path,
                        std::string& opt_a, std::string& opt_d,
                        std::string& opt_other, std::int64_t& permute_seed) {
  cmd->add_option("--config", cfg_path, "JSON config file");
  cmd->add_option("--task", cfg.task, "copying|adding|mnist|mnist_permuted");
  cmd->add_option("--seq-len", cfg.T, "sequence length T");
  cmd->add_option("--hidden", cfg.hidden, "hidden units");
  cmd->add_option("--batch", cfg.batch, "batch size");
  cmd->add_option("--iters", cfg.iters, "training iterations (copying)");
  cmd->add_option("--epochs", cfg.epochs, "training epochs (adding/mnist)");
  cmd->add_option("--opt-a", opt_a, "A-group optimizer KIND:LR");
  cmd->add_option("--opt-d", opt_d, "D-group optimizer KIND:LR");
  cmd->add_option("--opt-other", opt_other, "dense-group optimizer KIND:LR");
  cmd->add_option("--seed", cfg.seed, "parameter init seed");
  cmd->add_option("--data-seed", cfg.data_seed, "task data seed");
  cmd->add_option("--permute-seed", permute_seed, "fixed pixel permutation seed");
  cmd->add_option("--eval-every", cfg.eval_every, "evaluation interval");
  cmd->add_option("--data-dir", cfg.data_dir, "MNIST IDX directory");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_flag("--clamp-b", cfg.clamp_b, "clamp modReLU bias at 0 after updates");
  cmd->add_option("--h0-range", cfg.h0_range, "initial-state init range");
  cmd->add_option("--train-limit", cfg.train_limit, "cap on training samples");
  cmd->add_option("--test-limit", cfg.test_limit, "cap on test samples");
  cmd->add_option("--stop-below", cfg.stop_below,
                  "stop once eval metric drops below this value");
}

TrainConfig finalize_config(CLI::App* cmd, const TrainConfig& flags,
                            const std::string& cfg_path,
                            const std::string& opt_a, const std::string& opt_d,
                            const std::string& opt_other,
                            std::int64_t permute_seed) {
  TrainConfig cfg =
      cfg_path.empty() ? TrainConfig{} : scurnn::load_config(cfg_path);
  auto take = [&](const std::string& flag, auto member, auto value) {
    if (cmd->count(flag) > 0) cfg.*member = value;
  };
  take("--task", &TrainConfig::task, flags.task);
  take("--seq-len", &TrainConfig::T, flags.T);
  take("--hidden", &TrainConfig::hidden, flags.hidden);
  take("--batch", &TrainConfig::batch, flags.batch);
  take("--iters", &TrainConfig::iters, flags.iters);
  take("--epochs", &TrainConfig::epochs, flags.epochs);
  take("--seed", &TrainConfig::seed, flags.seed);
  take("--data-seed", &TrainConfig::data_seed, flags.data_seed);
  take("--eval-every", &TrainConfig::eval_every, flags.eval_every);
  take("--data-dir", &TrainConfig::data_dir, flags.data_dir);
  take("--out", &TrainConfig::out_dir, flags.out_dir);
  take("--h0-range", &TrainConfig::h0_range, flags.h0_range);
  take("--train-limit", &TrainConfig::train_limit, flags.train_limit);
  take("--test-limit", &TrainConfig::test_limit, flags.test_limit);
  take("--stop-below", &TrainConfig::stop_below, flags.stop_below);
  if (cmd->count("--clamp-b") > 0) cfg.clamp_b = true;
  if (cmd->count("--opt-a") > 0) cfg.opt_a = scurnn::parse_opt_spec(opt_a);
  if (cmd->count("--opt-d") > 0) cfg.opt_d = scurnn::parse_opt_spec(opt_d);
  if (cmd->count("--opt-other") > 0) {
    cfg.opt_other = scurnn::parse_opt_spec(opt_other);
  }
  if (cmd->count("--permute-seed") > 0) {
    cfg.permute_seed = static_cast<std::uint64_t>(permute_seed);
  }
  if (const char* env = std::getenv("SCURNN_THREADS")) {
    cfg.threads = std::max(1, std::atoi(env));
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scaled Cayley unitary RNN trainer"};
  app.require_subcommand(1);

  TrainConfig flags;
  std::string cfg_path, opt_a, opt_d, opt_other, ckpt_path;
  std::int64_t permute_seed = 0;

  CLI::App* train = app.add_subcommand("train", "train a model");
  add_common_options(train, flags, cfg_path, opt_a, opt_d, opt_other,
                     permute_seed);

  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  add_common_options(eval, flags, cfg_path, opt_a, opt_d, opt_other,
                     permute_seed);
  eval->add_option("--checkpoint", ckpt_path, "checkpoint file")->required();

  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "compare analytic gradients with finite differences");
  int gc_n = 4, gc_tau = 5;
  std::uint64_t gc_seed = 1;
  double gc_tol = 1e-5;
  gradcheck->add_option("--hidden", gc_n, "hidden units (<= 10)");
  gradcheck->add_option("--tau", gc_tau, "sequence length (<= 8)");
  gradcheck->add_option("--seed", gc_seed, "instance seed");
  gradcheck->add_option("--tol", gc_tol, "max relative error allowed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed()) {
      const TrainConfig cfg = finalize_config(train, flags, cfg_path, opt_a,
                                              opt_d, opt_other, permute_seed);
      const scurnn::TrainOutcome res = scurnn::run_train(cfg);
      if (res.exit_code != 0) {
        std::cerr << "error: " << res.error << "\n";
      } else {
        std::cout << "done: steps=" << res.steps_run
                  << " final_metric=" << res.final_metric << "\n";
      }
      return res.exit_code;
    }
    if (eval->parsed()) {
      const TrainConfig cfg = finalize_config(eval, flags, cfg_path, opt_a,
                                              opt_d, opt_other, permute_seed);
      const double metric = scurnn::run_eval_checkpoint(ckpt_path, cfg);
      std::cout << "eval_metric=" << metric << "\n";
      return 0;
    }
    // gradcheck
    if (gc_n > 10 || gc_tau > 8) {
      std::cerr << "error: gradcheck limited to hidden <= 10, tau <= 8\n";
      return 2;
    }
    const scurnn::GradCheckReport rep =
        scurnn::run_gradcheck(gc_n, gc_tau, gc_seed);
    for (const auto& [name, err] : rep.groups) {
      std::cout << name << " max_rel_err=" << err
                << (err < gc_tol ? " ok" : " FAIL") << "\n";
    }
    std::cout << (rep.pass(gc_tol) ? "PASS" : "FAIL") << " worst=" << rep.worst()
              << " tol=" << gc_tol << "\n";
    return rep.pass(gc_tol) ? 0 : 1;
  } catch (const scurnn::NumericFault& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
