// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/app/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "glmp/errors.hpp"

namespace glmp::app {

using nlohmann::json;

#define GLMP_CONFIG_FIELDS(X)                                                                              \
  X(task) X(data_dir) X(train_file) X(dev_file) X(test_file) X(entity_file) X(out_dir) X(hops) X(dim)     \
  X(tie_hops) X(init_scale) X(dropout) X(lr) X(lr_decay) X(lr_floor) X(lr_patience) X(clip_norm) X(batch_size) X(epochs) \
  X(patience) X(stop_at) X(alpha) X(beta) X(gamma) X(mask_ratio) X(seed) X(max_decode_len)               \
  X(max_dialogues) X(max_dev_dialogues) X(min_count) X(threads) X(subject_triplets) X(no_hidden_write)   \
  X(no_global_filter)

int RunConfig::babi_task() const {
  if (!is_babi()) return 0;
  const std::string n = task.substr(5);
  if (n.size() != 1 || n[0] < '1' || n[0] > '5') return -1;
  return n[0] - '0';
}

std::vector<std::string> RunConfig::errors() const {
  std::vector<std::string> e;
  if (task != "smd" && babi_task() <= 0) e.push_back("task must be babi:1..babi:5 or smd, got '" + task + "'");
  if (hops == 0) e.push_back("hops must be >= 1");
  if (dim == 0) e.push_back("dim must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) e.push_back("dropout must lie in [0, 1)");
  if (!(lr > 0.0)) e.push_back("lr must be > 0");
  if (!(lr_floor > 0.0 && lr_floor <= lr)) e.push_back("lr_floor must lie in (0, lr]");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) e.push_back("lr_decay must lie in (0, 1]");
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) e.push_back("loss weights must be >= 0");
  if (!(mask_ratio >= 0.0 && mask_ratio < 1.0)) e.push_back("mask_ratio must lie in [0, 1)");
  if (lr_patience == 0) e.push_back("lr_patience must be >= 1");
  if (batch_size == 0) e.push_back("batch_size must be >= 1");
  if (max_decode_len == 0) e.push_back("max_decode_len must be >= 1");
  if (threads == 0) e.push_back("threads must be >= 1");
  return e;
}

std::vector<std::string> RunConfig::warnings() const {
  std::vector<std::string> w;
  if (hops != 1 && hops != 3 && hops != 6) w.push_back("hops=" + std::to_string(hops) + " is off the tuned grid {1,3,6}");
  return w;
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
#define GLMP_PUT(f) j[#f] = f;
  GLMP_CONFIG_FIELDS(GLMP_PUT)
#undef GLMP_PUT
  return j.dump(2);
}

RunConfig RunConfig::from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), 0);
  }
  if (!j.is_object()) throw ParseError("config must be a JSON object", 0);
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    try {
#define GLMP_GET(f)                     \
  if (key == #f) {                      \
    c.f = value.get<decltype(c.f)>();   \
    known = true;                       \
  }
      GLMP_CONFIG_FIELDS(GLMP_GET)
#undef GLMP_GET
    } catch (const json::exception& e) {
      throw ParseError("config key '" + key + "': " + e.what(), 0);
    }
    if (!known) throw ParseError("unknown config key '" + key + "'", 0);
  }
  return c;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  json j = json::object();
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = std::string(value);
  }
  nlohmann::ordered_json current = json::parse(to_json());
  if (!current.contains(std::string(key))) throw ParseError("unknown config key '" + std::string(key) + "'", 0);
  if (current[std::string(key)].is_string()) v = std::string(value);
  current[std::string(key)] = v;
  *this = from_json(current.dump());
}

RunConfig defaults_for(std::string_view task, std::size_t hops) {
  RunConfig c;
  c.task = std::string(task);
  c.hops = hops;
  const std::size_t slot = hops >= 6 ? 2 : hops >= 3 ? 1 : 0;
  if (task == "smd") {
    c.dim = 128;
    const double drop[] = {0.2, 0.2, 0.3};
    c.dropout = drop[slot];
    return c;
  }
  const int t = c.babi_task();
  // Per-task hidden size and dropout for K = 1 / 3 / 6.
  struct Row {
    std::size_t dim[3];
    double drop[3];
  };
  static const Row kRows[] = {
      {{64, 64, 64}, {0.1, 0.3, 0.3}},     // T1
      {{64, 64, 64}, {0.3, 0.3, 0.3}},     // T2
      {{64, 64, 64}, {0.3, 0.3, 0.5}},     // T3
      {{64, 64, 64}, {0.7, 0.7, 0.5}},     // T4
      {{128, 128, 128}, {0.3, 0.1, 0.1}},  // T5
  };
  if (t >= 1 && t <= 5) {
    c.dim = kRows[t - 1].dim[slot];
    c.dropout = kRows[t - 1].drop[slot];
  }
  c.stop_at = 1.0;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return RunConfig::from_json(ss.str());
}

}  // namespace glmp::app
