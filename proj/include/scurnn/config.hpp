#pragma once
#include <optional>
#include <string>

#include "scurnn/optim.hpp"

namespace scurnn {

struct OptSpec {
  OptKind kind = OptKind::adam;
  double lr = 1e-3;
};

// Parses "kind:lr", e.g. "rmsprop:1e-4".
OptSpec parse_opt_spec(const std::string& s);
std::string opt_spec_to_string(const OptSpec& s);

struct TrainConfig {
  std::string task = "copying";  // copying | adding | mnist | mnist_permuted
  int T = 100;                   // sequence length (copying/adding)
  int hidden = 64;
  int batch = 128;
  int iters = 2000;   // copying: total iterations
  int epochs = 10;    // adding/mnist: passes over the training set
  OptSpec opt_a;      // skew-Hermitian matrix group
  OptSpec opt_d;      // scaling matrix group
  OptSpec opt_other;  // dense weights group
  std::uint64_t seed = 1;       // parameter init
  std::uint64_t data_seed = 2;  // task data
  std::optional<std::uint64_t> permute_seed;
  int eval_every = 100;
  std::string out_dir = "run_out";
  std::string data_dir = "data/mnist";
  bool clamp_b = false;  // clamp modReLU bias at 0 after each update
  double h0_range = 0.01;
  double probe_threshold = 100.0;
  int train_limit = 0;  // cap on training samples (mnist/adding), 0 = task default
  int test_limit = 0;   // cap on evaluation samples, 0 = task default
  double stop_below = 0.0;  // stop once eval metric < this (0 = off)
  int threads = 1;

  void validate() const;
};

// Flat JSON file; unknown keys are rejected.
TrainConfig load_config(const std::string& path);
std::string config_to_json(const TrainConfig& cfg);

}  // namespace scurnn
