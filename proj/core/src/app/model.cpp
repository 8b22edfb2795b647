// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/app/model.hpp"

#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "glmp/data/babi.hpp"
#include "glmp/data/serialize.hpp"
#include "glmp/data/smd.hpp"
#include "glmp/numerics/checkpoint.hpp"

namespace glmp::app {

using nlohmann::json;

Model Model::create(const RunConfig& config, data::Vocabulary vocab, data::EntityTable entities) {
  if (auto errs = config.errors(); !errs.empty()) throw std::invalid_argument("invalid config: " + errs.front());
  Model m;
  m.config = config;
  m.vocab = std::move(vocab);
  m.entities = std::move(entities);
  m.shape = {m.vocab.size(), config.dim, config.hops, config.tie_hops, config.init_scale};
  m.params = numerics::ParamStore(config.seed);
  numerics::Rng rng(numerics::mix_seed(config.seed, 0x1a17));
  m.handles = decoder::ModelParams::create(m.params, m.shape, rng);
  return m;
}

decoder::ForwardOptions Model::forward_options() const {
  decoder::ForwardOptions o;
  o.write_hidden = !config.no_hidden_write;
  o.global_filter = !config.no_global_filter;
  o.weights = {config.alpha, config.beta, config.gamma};
  return o;
}

std::string Model::metadata() const {
  nlohmann::ordered_json j;
  j["format"] = kModelFormat;
  j["config"] = json::parse(config.to_json());
  j["vocab"] = vocab.tokens();
  json ents = json::array();
  for (const auto& v : entities.values()) ents.push_back({v, *entities.slot_of(v)});
  j["entities"] = ents;
  return j.dump();
}

std::vector<std::uint8_t> Model::encode() const { return numerics::encode_checkpoint(params, metadata()); }

std::uint64_t Model::hash() const { return numerics::fnv1a64(encode()); }

void Model::save(const std::filesystem::path& path) const { numerics::save_checkpoint(path, params, metadata()); }

namespace {

Model from_checkpoint(numerics::Checkpoint ckpt) {
  json j;
  try {
    j = json::parse(ckpt.metadata);
  } catch (const json::parse_error&) {
    throw VersionError("checkpoint metadata is not a glmp model record");
  }
  if (j.value("format", "") != kModelFormat) throw VersionError("checkpoint metadata is not a glmp model record");
  Model m;
  m.config = RunConfig::from_json(j.at("config").dump());
  m.vocab = data::Vocabulary::from_tokens(j.at("vocab").get<std::vector<std::string>>());
  for (const auto& e : j.at("entities")) m.entities.add(e[0].get<std::string>(), e[1].get<std::string>());
  m.shape = {m.vocab.size(), m.config.dim, m.config.hops, m.config.tie_hops, m.config.init_scale};
  m.params = std::move(ckpt.params);
  try {
    m.handles = decoder::ModelParams::lookup(m.params, m.shape);
  } catch (const std::exception& e) {
    throw VersionError(std::string("checkpoint does not hold the expected parameters: ") + e.what());
  }
  const auto& table = m.params[m.handles.memory.table(1)].value;
  if (table.rows() != m.vocab.size() || table.cols() != m.config.dim) {
    throw VersionError("checkpoint embedding shape " + numerics::shape_string(table.shape()) + " does not match its config");
  }
  return m;
}

}  // namespace

Model Model::decode(const std::vector<std::uint8_t>& bytes) {
  return from_checkpoint(numerics::decode_checkpoint(bytes));
}

Model Model::load(const std::filesystem::path& path) { return from_checkpoint(numerics::load_checkpoint(path)); }

void check_compatible(const Model& model, const RunConfig& config) {
  const auto& c = model.config;
  auto mismatch = [](const std::string& what, const std::string& a, const std::string& b) {
    throw VersionError("checkpoint/config mismatch: " + what + " is " + a + " in the checkpoint but " + b +
                       " in the config");
  };
  if (c.task != config.task) mismatch("task", c.task, config.task);
  if (c.hops != config.hops) mismatch("hops", std::to_string(c.hops), std::to_string(config.hops));
  if (c.dim != config.dim) mismatch("dim", std::to_string(c.dim), std::to_string(config.dim));
  if (c.tie_hops != config.tie_hops) mismatch("tie_hops", c.tie_hops ? "true" : "false", config.tie_hops ? "true" : "false");
}

// ---------------------------------------------------------------------------

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  if (name == "oov" || name == "test-oov") return Split::kTestOov;
  throw std::invalid_argument("unknown split '" + std::string(name) + "' (train|dev|test|oov)");
}

std::string split_name(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kTestOov: return "oov";
  }
  return "?";
}

std::filesystem::path split_path(const RunConfig& config, Split split) {
  const std::string& override_path = split == Split::kTrain ? config.train_file
                                     : split == Split::kDev ? config.dev_file
                                     : split == Split::kTest ? config.test_file
                                                             : std::string();
  if (!override_path.empty()) return override_path;
  const std::filesystem::path dir = config.data_dir;
  if (config.is_babi()) {
    const auto s = split == Split::kTrain ? data::BabiSplit::kTrain
                   : split == Split::kDev ? data::BabiSplit::kDev
                   : split == Split::kTest ? data::BabiSplit::kTest
                                           : data::BabiSplit::kTestOov;
    return dir / data::babi_file_name(config.babi_task(), s);
  }
  if (split == Split::kTestOov) throw std::invalid_argument("the SMD corpus has no OOV split");
  return dir / data::smd_file_name(split_name(split));
}

data::EntityTable load_entities(const RunConfig& config) {
  std::filesystem::path path = config.entity_file;
  if (path.empty()) {
    path = std::filesystem::path(config.data_dir) /
           (config.is_babi() ? std::string(data::kBabiKbFile) : std::string(data::kSmdEntityFile));
    if (!std::filesystem::exists(path)) return {};
  }
  return config.is_babi() ? data::load_babi_entities(path) : data::load_smd_entities(path);
}

std::vector<data::DialogueSample> load_split(const RunConfig& config, Split split, const data::EntityTable& entities) {
  const auto path = split_path(config, split);
  if (path.extension() == ".jsonl") return data::read_samples(path);
  if (config.is_babi()) return data::parse_babi(path, entities);
  data::SmdOptions opts;
  opts.subject_triplets = config.subject_triplets;
  return data::parse_smd(path, entities, opts);
}

std::vector<data::DialogueSample> take_dialogues(std::vector<data::DialogueSample> samples, std::size_t max_dialogues) {
  if (max_dialogues == 0) return samples;
  std::unordered_set<std::string> kept;
  std::vector<data::DialogueSample> out;
  for (auto& s : samples) {
    if (!kept.contains(s.dialogue_id)) {
      if (kept.size() == max_dialogues) continue;
      kept.insert(s.dialogue_id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace glmp::app
