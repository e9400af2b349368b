#include "scurnn/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace scurnn {

OptSpec parse_opt_spec(const std::string& s) {
  const auto pos = s.find(':');
  if (pos == std::string::npos) {
    throw ConfigError("optimizer spec must be KIND:LR, got '" + s + "'");
  }
  OptSpec spec;
  spec.kind = opt_kind_from_string(s.substr(0, pos));
  try {
    spec.lr = std::stod(s.substr(pos + 1));
  } catch (const std::exception&) {
    throw ConfigError("bad learning rate in optimizer spec '" + s + "'");
  }
  if (spec.lr <= 0.0) throw ConfigError("learning rate must be > 0");
  return spec;
}

std::string opt_spec_to_string(const OptSpec& s) {
  std::ostringstream os;
  os << opt_kind_to_string(s.kind) << ":" << s.lr;
  return os.str();
}

void TrainConfig::validate() const {
  if (task != "copying" && task != "adding" && task != "mnist" &&
      task != "mnist_permuted") {
    throw ConfigError("unknown task: " + task);
  }
  if (hidden < 1 || batch < 1 || T < 1) {
    throw ConfigError("sizes must be positive");
  }
  if (eval_every < 1) throw ConfigError("eval_every must be >= 1");
  if (threads < 1) throw ConfigError("threads must be >= 1");
}

TrainConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  TrainConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "task") cfg.task = it->get<std::string>();
    else if (k == "T") cfg.T = it->get<int>();
    else if (k == "hidden") cfg.hidden = it->get<int>();
    else if (k == "batch") cfg.batch = it->get<int>();
    else if (k == "iters") cfg.iters = it->get<int>();
    else if (k == "epochs") cfg.epochs = it->get<int>();
    else if (k == "opt_a") cfg.opt_a = parse_opt_spec(it->get<std::string>());
    else if (k == "opt_d") cfg.opt_d = parse_opt_spec(it->get<std::string>());
    else if (k == "opt_other") cfg.opt_other = parse_opt_spec(it->get<std::string>());
    else if (k == "seed") cfg.seed = it->get<std::uint64_t>();
    else if (k == "data_seed") cfg.data_seed = it->get<std::uint64_t>();
    else if (k == "permute_seed") cfg.permute_seed = it->get<std::uint64_t>();
    else if (k == "eval_every") cfg.eval_every = it->get<int>();
    else if (k == "out_dir") cfg.out_dir = it->get<std::string>();
    else if (k == "data_dir") cfg.data_dir = it->get<std::string>();
    else if (k == "clamp_b") cfg.clamp_b = it->get<bool>();
    else if (k == "h0_range") cfg.h0_range = it->get<double>();
    else if (k == "probe_threshold") cfg.probe_threshold = it->get<double>();
    else if (k == "train_limit") cfg.train_limit = it->get<int>();
    else if (k == "test_limit") cfg.test_limit = it->get<int>();
    else if (k == "stop_below") cfg.stop_below = it->get<double>();
    else if (k == "threads") cfg.threads = it->get<int>();
    else throw ConfigError("unknown config key: " + k);
  }
  return cfg;
}

std::string config_to_json(const TrainConfig& cfg) {
  nlohmann::json j;
  j["task"] = cfg.task;
  j["T"] = cfg.T;
  j["hidden"] = cfg.hidden;
  j["batch"] = cfg.batch;
  j["iters"] = cfg.iters;
  j["epochs"] = cfg.epochs;
  j["opt_a"] = opt_spec_to_string(cfg.opt_a);
  j["opt_d"] = opt_spec_to_string(cfg.opt_d);
  j["opt_other"] = opt_spec_to_string(cfg.opt_other);
  j["seed"] = cfg.seed;
  j["data_seed"] = cfg.data_seed;
  if (cfg.permute_seed) j["permute_seed"] = *cfg.permute_seed;
  j["eval_every"] = cfg.eval_every;
  j["out_dir"] = cfg.out_dir;
  j["data_dir"] = cfg.data_dir;
  j["clamp_b"] = cfg.clamp_b;
  j["h0_range"] = cfg.h0_range;
  j["probe_threshold"] = cfg.probe_threshold;
  j["train_limit"] = cfg.train_limit;
  j["test_limit"] = cfg.test_limit;
  j["stop_below"] = cfg.stop_below;
  j["threads"] = cfg.threads;
  return j.dump(2);
}

}  // namespace scurnn
