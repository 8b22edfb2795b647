// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "glmp/app/config.hpp"
#include "glmp/app/model.hpp"
#include "glmp/app/synth.hpp"
#include "glmp/app/trainer.hpp"
#include "glmp/data/babi.hpp"
#include "glmp/data/serialize.hpp"
#include "glmp/data/smd.hpp"
#include "glmp/errors.hpp"

namespace fs = std::filesystem;
using glmp::app::RunConfig;

namespace {

struct ConfigFlags {
  std::string config_file;
  std::vector<std::string> sets;
  std::optional<std::string> task, data_dir, out_dir, train_file, dev_file, test_file, entity_file;
  std::optional<std::size_t> hops, dim, epochs, threads, max_dialogues, batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> dropout, lr, mask_ratio;
  bool no_h = false;
  bool no_g = false;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config_file, "JSON run config")->check(CLI::ExistingFile);
    app->add_option("--set", sets, "key=value override (repeatable)");
    app->add_option("--task", task, "babi:1..babi:5 | smd");
    app->add_option("--data-dir", data_dir, "directory holding the official split files");
    app->add_option("--out-dir", out_dir, "run directory");
    app->add_option("--train-file", train_file);
    app->add_option("--dev-file", dev_file);
    app->add_option("--test-file", test_file);
    app->add_option("--entity-file", entity_file);
    app->add_option("--hops", hops, "memory hops K");
    app->add_option("--dim", dim, "embedding / hidden size");
    app->add_option("--epochs", epochs);
    app->add_option("--threads", threads);
    app->add_option("--max-dialogues", max_dialogues, "train on the first N dialogues only");
    app->add_option("--batch-size", batch_size);
    app->add_option("--seed", seed);
    app->add_option("--dropout", dropout);
    app->add_option("--lr", lr);
    app->add_option("--mask-ratio", mask_ratio);
    app->add_flag("--no-h", no_h, "ablation: skip the hidden-state write");
    app->add_flag("--no-g", no_g, "ablation: skip the global filter");
  }

  bool any_model_flag() const { return !config_file.empty() || task || hops || dim; }

  RunConfig build() const {
    nlohmann::json file = nlohmann::json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      std::stringstream ss;
      ss << in.rdbuf();
      file = nlohmann::json::parse(ss.str());
      RunConfig::from_json(ss.str());  // validates keys and types
    }
    const std::string t = task ? *task : file.value("task", std::string("babi:1"));
    const std::size_t k = hops ? *hops : file.value("hops", std::size_t{1});
    RunConfig c = glmp::app::defaults_for(t, k);
    for (const auto& [key, value] : file.items()) c.set(key, value.is_string() ? value.get<std::string>() : value.dump());
    if (task) c.task = *task;
    if (hops) c.hops = *hops;
    if (data_dir) c.data_dir = *data_dir;
    if (out_dir) c.out_dir = *out_dir;
    if (train_file) c.train_file = *train_file;
    if (dev_file) c.dev_file = *dev_file;
    if (test_file) c.test_file = *test_file;
    if (entity_file) c.entity_file = *entity_file;
    if (dim) c.dim = *dim;
    if (epochs) c.epochs = *epochs;
    if (threads) c.threads = *threads;
    if (max_dialogues) c.max_dialogues = *max_dialogues;
    if (batch_size) c.batch_size = *batch_size;
    if (seed) c.seed = *seed;
    if (dropout) c.dropout = *dropout;
    if (lr) c.lr = *lr;
    if (mask_ratio) c.mask_ratio = *mask_ratio;
    if (no_h) c.no_hidden_write = true;
    if (no_g) c.no_global_filter = true;
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + s + "'");
      c.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (auto errs = c.errors(); !errs.empty()) {
      std::string msg = "invalid config:";
      for (const auto& e : errs) msg += "\n  " + e;
      throw std::invalid_argument(msg);
    }
    for (const auto& w : c.warnings()) std::cerr << "warning: " << w << '\n';
    return c;
  }
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

// Checkpoint config with data paths (and thread count) taken from the flags.
RunConfig eval_config(const glmp::app::Model& model, const ConfigFlags& flags) {
  RunConfig c = model.config;
  if (flags.any_model_flag()) {
    RunConfig wanted = flags.build();
    glmp::app::check_compatible(model, wanted);
    c.data_dir = wanted.data_dir;
    c.train_file = wanted.train_file;
    c.dev_file = wanted.dev_file;
    c.test_file = wanted.test_file;
    c.entity_file = wanted.entity_file;
    c.threads = wanted.threads;
  } else {
    if (flags.data_dir) c.data_dir = *flags.data_dir;
    if (flags.train_file) c.train_file = *flags.train_file;
    if (flags.dev_file) c.dev_file = *flags.dev_file;
    if (flags.test_file) c.test_file = *flags.test_file;
    if (flags.entity_file) c.entity_file = *flags.entity_file;
    if (flags.threads) c.threads = *flags.threads;
  }
  return c;
}

int run_train(const ConfigFlags& flags) {
  const RunConfig config = flags.build();
  const fs::path out = config.out_dir;
  fs::create_directories(out);
  write_file(out / "config.json", config.to_json() + "\n");
  const auto entities = glmp::app::load_entities(config);
  auto train = glmp::app::take_dialogues(glmp::app::load_split(config, glmp::app::Split::kTrain, entities),
                                         config.max_dialogues);
  auto dev = glmp::app::take_dialogues(glmp::app::load_split(config, glmp::app::Split::kDev, entities),
                                       config.max_dev_dialogues);
  std::cerr << "train samples " << train.size() << ", dev samples " << dev.size() << '\n';
  std::ofstream log(out / "metrics.jsonl", std::ios::app);
  auto result = glmp::app::train(config, train, dev, entities, [&](const glmp::app::EpochRecord& r) {
    log << r.to_json() << '\n';
    log.flush();
    std::cerr << "epoch " << r.epoch << " loss " << r.loss << " dev " << config.dev_metric() << " " << r.dev_metric
              << " lr " << r.lr << (r.improved ? " *" : "") << '\n';
  });
  result.best.save(out / "best.ckpt");
  std::cout << "best_epoch " << result.best_epoch << "\n"
            << "best_" << config.dev_metric() << " " << result.best_metric << "\n"
            << "stop_reason " << result.stop_reason << "\n"
            << "checkpoint " << (out / "best.ckpt").string() << "\n"
            << "checkpoint_hash " << std::hex << result.best.hash() << std::dec << "\n";
  return 0;
}

int run_eval(const ConfigFlags& flags, const std::string& checkpoint, const std::string& split,
             const std::string& json_out) {
  const auto model = glmp::app::Model::load(checkpoint);
  const RunConfig config = eval_config(model, flags);
  auto samples = glmp::app::load_split(config, glmp::app::parse_split(split), model.entities);
  glmp::app::Model m = model;
  m.config.threads = config.threads;
  const auto report = glmp::app::evaluate_model(m, samples);
  std::cout << report.to_text();
  if (!json_out.empty()) write_file(json_out, report.to_json() + "\n");
  return 0;
}

int run_decode(const ConfigFlags& flags, const std::string& checkpoint, const std::string& input,
               const std::string& format) {
  auto model = glmp::app::Model::load(checkpoint);
  const RunConfig config = eval_config(model, flags);
  model.config.threads = config.threads;
  std::vector<glmp::data::DialogueSample> samples;
  const std::string fmt = !format.empty() ? format
                          : fs::path(input).extension() == ".jsonl" ? "jsonl"
                          : fs::path(input).extension() == ".json"  ? "smd"
                                                                    : "babi";
  if (fmt == "jsonl") {
    samples = glmp::data::read_samples(input);
  } else if (fmt == "smd") {
    glmp::data::SmdOptions o;
    o.subject_triplets = model.config.subject_triplets;
    samples = glmp::data::parse_smd(input, model.entities, o);
  } else if (fmt == "babi") {
    samples = glmp::data::parse_babi(input, model.entities);
  } else {
    throw std::invalid_argument("unknown input format '" + fmt + "' (babi|smd|jsonl)");
  }
  const auto preds = glmp::app::predict(model, samples);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::string pred, gold;
    for (const auto& t : preds[i].tokens) pred += (pred.empty() ? "" : " ") + glmp::data::surface(t);
    for (const auto& t : samples[i].gold) gold += (gold.empty() ? "" : " ") + glmp::data::surface(t);
    std::cout << samples[i].dialogue_id << '\t' << samples[i].turn << '\t' << pred << '\t' << gold << '\n';
  }
  return 0;
}

int run_dump(const ConfigFlags& flags, const std::string& checkpoint, const std::string& split, std::size_t index,
             const std::string& out_path) {
  const auto model = glmp::app::Model::load(checkpoint);
  const RunConfig config = eval_config(model, flags);
  auto samples = glmp::app::load_split(config, glmp::app::parse_split(split), model.entities);
  if (index >= samples.size()) {
    throw glmp::IndexError("sample " + std::to_string(index) + " out of range (split has " +
                           std::to_string(samples.size()) + " samples)");
  }
  if (out_path.empty() || out_path == "-") {
    glmp::app::write_attention_trace(model, samples[index], std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    glmp::app::write_attention_trace(model, samples[index], out);
  }
  return 0;
}

int run_ablate(const ConfigFlags& flags, const std::vector<std::string>& variants, const std::string& split) {
  const RunConfig config = flags.build();
  const fs::path out = config.out_dir;
  fs::create_directories(out);
  const auto entities = glmp::app::load_entities(config);
  auto train = glmp::app::take_dialogues(glmp::app::load_split(config, glmp::app::Split::kTrain, entities),
                                         config.max_dialogues);
  auto dev = glmp::app::take_dialogues(glmp::app::load_split(config, glmp::app::Split::kDev, entities),
                                       config.max_dev_dialogues);
  auto test = glmp::app::load_split(config, glmp::app::parse_split(split), entities);
  const auto rows = glmp::app::run_ablation(config, train, dev, test, entities, variants);
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  std::cout << "variant\tper_response_accuracy\tcompletion_rate\tbleu\tentity_f1\n";
  for (const auto& r : rows) {
    std::cout << r.variant << '\t' << r.report.per_response_accuracy << '\t' << r.report.completion_rate << '\t'
              << r.report.bleu << '\t' << r.report.entity.overall.f1() << '\n';
    nlohmann::ordered_json row;
    row["variant"] = r.variant;
    row["report"] = nlohmann::ordered_json::parse(r.report.to_json());
    j.push_back(row);
  }
  write_file(out / "ablation.json", j.dump(2) + "\n");
  return 0;
}

int run_prepare(const ConfigFlags& flags, const std::string& split, const std::string& out_path) {
  const RunConfig config = flags.build();
  const auto entities = glmp::app::load_entities(config);
  const auto samples = glmp::app::load_split(config, glmp::app::parse_split(split), entities);
  glmp::data::write_samples(out_path, samples);
  std::cout << "samples " << samples.size() << "\ndialogues " << glmp::data::dialogue_ids(samples).size() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLMP task-oriented dialogue: train, evaluate, decode, inspect"};
  app.require_subcommand(1);

  ConfigFlags flags;
  std::string checkpoint, split = "test", json_out, input, format, out_path;
  std::size_t sample_index = 0;
  std::vector<std::string> variants = {"full", "no_h", "no_g"};

  auto* train = app.add_subcommand("train", "train a model and keep the best dev checkpoint");
  flags.attach(train);

  auto* eval = app.add_subcommand("eval", "greedy-decode a split and print the metric report");
  flags.attach(eval);
  eval->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--split", split, "train | dev | test | oov");
  eval->add_option("--json", json_out, "also write the report as JSON");

  auto* decode = app.add_subcommand("decode", "decode every system turn of a dialogue file");
  flags.attach(decode);
  decode->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  decode->add_option("--input", input)->required()->check(CLI::ExistingFile);
  decode->add_option("--format", format, "babi | smd | jsonl (default: by extension)");

  auto* dump = app.add_subcommand("dump-attention", "write the per-step memory attention trace of one sample");
  flags.attach(dump);
  dump->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  dump->add_option("--split", split, "train | dev | test | oov");
  dump->add_option("--sample", sample_index, "0-based sample index within the split");
  dump->add_option("-o,--out", out_path, "output file (default stdout)");

  auto* ablate = app.add_subcommand("ablate", "train and evaluate the ablation variants");
  flags.attach(ablate);
  ablate->add_option("--variants", variants, "full, no_h, no_g, no_hg")->delimiter(',');
  ablate->add_option("--split", split, "evaluation split");

  auto* prepare = app.add_subcommand("prepare", "parse a split and cache it as sample records");
  flags.attach(prepare);
  prepare->add_option("--split", split);
  prepare->add_option("-o,--out", out_path)->required();

  std::string synth_kind, synth_dir;
  std::size_t n_train = 0, n_dev = 0, n_test = 0, n_oov = 0;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus in the official file layout");
  synth->add_option("kind", synth_kind, "babi | smd")->required()->check(CLI::IsMember({"babi", "smd"}));
  synth->add_option("-o,--out", synth_dir)->required();
  synth->add_option("--train", n_train);
  synth->add_option("--dev", n_dev);
  synth->add_option("--test", n_test);
  synth->add_option("--oov", n_oov);
  synth->add_option("--seed", synth_seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return run_train(flags);
    if (*eval) return run_eval(flags, checkpoint, split, json_out);
    if (*decode) return run_decode(flags, checkpoint, input, format);
    if (*dump) return run_dump(flags, checkpoint, split, sample_index, out_path);
    if (*ablate) return run_ablate(flags, variants, split);
    if (*prepare) return run_prepare(flags, split, out_path);
    if (*synth) {
      if (synth_kind == "babi") {
        glmp::app::BabiSynthOptions o;
        if (n_train) o.train = n_train;
        if (n_dev) o.dev = n_dev;
        if (n_test) o.test = n_test;
        if (n_oov) o.test_oov = n_oov;
        if (synth_seed) o.seed = synth_seed;
        glmp::app::write_synth_babi(synth_dir, o);
      } else {
        glmp::app::SmdSynthOptions o;
        if (n_train) o.train = n_train;
        if (n_dev) o.dev = n_dev;
        if (n_test) o.test = n_test;
        if (synth_seed) o.seed = synth_seed;
        glmp::app::write_synth_smd(synth_dir, o);
      }
      return 0;
    }
  } catch (const glmp::VersionError& e) {
    std::cerr << "version error: " << e.what() << '\n';
    return 3;
  } catch (const glmp::TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
