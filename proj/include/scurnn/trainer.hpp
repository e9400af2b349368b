#pragma once
#include "scurnn/checkpoint.hpp"
#include "scurnn/config.hpp"
#include "scurnn/tasks.hpp"

namespace scurnn {

struct TrainOutcome {
  int exit_code = 0;  // 0 ok, 1 numeric fault, 2 config/IO error
  double final_metric = 0.0;
  int steps_run = 0;
  std::string error;
};

// Full training loop: per iteration build_unitary, forward, loss head,
// backward, grad_A/grad_theta, per-group optimizer steps. Writes
// metrics.csv, config.json and checkpoint.bin into cfg.out_dir.
TrainOutcome run_train(const TrainConfig& cfg);

// Evaluation-only pass over the task's test split.
double run_eval_checkpoint(const std::string& checkpoint_path,
                           const TrainConfig& cfg);

}  // namespace scurnn
