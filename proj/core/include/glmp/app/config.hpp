// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace glmp::app {

/// Everything a run needs. Field names double as config-file keys.
struct RunConfig {
  std::string task = "babi:1";  // babi:1..babi:5 | smd
  std::string data_dir = "data";
  std::string train_file;  // overrides the split file derived from task + data_dir
  std::string dev_file;
  std::string test_file;
  std::string entity_file;
  std::string out_dir = "runs/default";

  std::size_t hops = 1;
  std::size_t dim = 64;
  bool tie_hops = false;
  double init_scale = 0.1;
  double dropout = 0.1;

  double lr = 1e-3;
  double lr_decay = 0.5;
  double lr_floor = 1e-4;
  std::size_t lr_patience = 1;  // non-improving dev evaluations before each halving
  double clip_norm = 10.0;
  std::size_t batch_size = 8;
  std::size_t epochs = 200;
  std::size_t patience = 6;
  double stop_at = -1.0;  // stop once the dev metric reaches this value; < 0 disables

  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double mask_ratio = 0.05;

  std::uint64_t seed = 1;
  std::size_t max_decode_len = 40;
  std::size_t max_dialogues = 0;  // 0 = all; otherwise the first N training dialogues
  std::size_t max_dev_dialogues = 0;
  std::size_t min_count = 1;
  std::size_t threads = 1;
  bool subject_triplets = true;

  bool no_hidden_write = false;    // "w/o H"
  bool no_global_filter = false;   // "w/o G"

  bool is_babi() const { return task.rfind("babi:", 0) == 0; }
  int babi_task() const;
  // Dev metric used for model selection: per-response accuracy (bAbI) or BLEU (SMD).
  std::string dev_metric() const { return is_babi() ? "per_response_accuracy" : "bleu"; }

  // Problems that make the config unusable; empty when valid.
  std::vector<std::string> errors() const;
  // Legal but off the tuned grid (e.g. K outside {1,3,6}).
  std::vector<std::string> warnings() const;

  std::string to_json() const;
  static RunConfig from_json(std::string_view text);
  // key=value with the value parsed according to the field's type.
  void set(std::string_view key, std::string_view value);
};

// Hidden size, dropout and stop rule for a task and hop count.
RunConfig defaults_for(std::string_view task, std::size_t hops);

RunConfig load_config(const std::filesystem::path& path);

}  // namespace glmp::app
