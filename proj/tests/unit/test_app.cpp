// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <map>
#include <sstream>

#include "glmp/app/config.hpp"
#include "glmp/app/model.hpp"
#include "glmp/app/synth.hpp"
#include "glmp/app/trainer.hpp"
#include "glmp/data/babi.hpp"
#include "glmp/errors.hpp"

namespace ga = glmp::app;
namespace fs = std::filesystem;

namespace {

fs::path synth_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "glmp_test_app_babi";
    fs::remove_all(d);
    ga::write_synth_babi(d, {30, 6, 6, 6, 5});
    return d;
  }();
  return dir;
}

ga::RunConfig tiny_config() {
  auto c = ga::defaults_for("babi:1", 1);
  c.data_dir = synth_dir().string();
  c.dim = 12;
  c.epochs = 3;
  c.max_dialogues = 6;
  c.max_dev_dialogues = 3;
  c.batch_size = 4;
  c.stop_at = -1.0;
  c.seed = 5;
  return c;
}

struct Loaded {
  glmp::data::EntityTable entities;
  std::vector<glmp::data::DialogueSample> train, dev;
};

Loaded load(const ga::RunConfig& c) {
  Loaded l;
  l.entities = ga::load_entities(c);
  l.train = ga::take_dialogues(ga::load_split(c, ga::Split::kTrain, l.entities), c.max_dialogues);
  l.dev = ga::take_dialogues(ga::load_split(c, ga::Split::kDev, l.entities), c.max_dev_dialogues);
  return l;
}

std::vector<std::map<std::string, std::string>> parse_tsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  std::istringstream hs(line);
  for (std::string f; std::getline(hs, f, '\t');) header.push_back(f);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::map<std::string, std::string> row;
    std::size_t i = 0;
    for (std::string f; std::getline(ls, f, '\t');) row[header.at(i++)] = f;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

TEST(Config, PerTaskDefaults) {
  struct Case {
    const char* task;
    std::size_t hops, dim;
    double dropout;
  };
  for (const auto& c : {Case{"babi:1", 1, 64, 0.1}, Case{"babi:1", 3, 64, 0.3}, Case{"babi:3", 6, 64, 0.5},
                        Case{"babi:4", 1, 64, 0.7}, Case{"babi:4", 6, 64, 0.5}, Case{"babi:5", 1, 128, 0.3},
                        Case{"babi:5", 3, 128, 0.1}, Case{"smd", 1, 128, 0.2}, Case{"smd", 6, 128, 0.3}}) {
    auto cfg = ga::defaults_for(c.task, c.hops);
    EXPECT_EQ(cfg.dim, c.dim) << c.task << " K" << c.hops;
    EXPECT_DOUBLE_EQ(cfg.dropout, c.dropout) << c.task << " K" << c.hops;
    EXPECT_DOUBLE_EQ(cfg.lr, 1e-3);
    EXPECT_DOUBLE_EQ(cfg.lr_decay, 0.5);
    EXPECT_DOUBLE_EQ(cfg.lr_floor, 1e-4);
    EXPECT_TRUE(cfg.errors().empty());
  }
  EXPECT_EQ(ga::defaults_for("smd", 1).dev_metric(), "bleu");
  EXPECT_EQ(ga::defaults_for("babi:2", 1).dev_metric(), "per_response_accuracy");
}

TEST(Config, ValidationAndWarnings) {
  auto c = ga::defaults_for("babi:1", 2);
  EXPECT_TRUE(c.errors().empty());
  EXPECT_FALSE(c.warnings().empty());
  c.lr_floor = 1e-2;
  c.alpha = -1.0;
  EXPECT_GE(c.errors().size(), 2u);
  auto bad = ga::defaults_for("babi:1", 1);
  bad.task = "babi:9";
  EXPECT_FALSE(bad.errors().empty());
}

TEST(Config, JsonRoundTripAndOverrides) {
  auto c = ga::defaults_for("babi:5", 3);
  c.set("lr", "0.002");
  c.set("no_global_filter", "true");
  c.set("seed", "77");
  EXPECT_DOUBLE_EQ(c.lr, 0.002);
  EXPECT_TRUE(c.no_global_filter);
  EXPECT_EQ(c.seed, 77u);
  auto back = ga::RunConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
  EXPECT_THROW(ga::RunConfig::from_json(R"({"no_such_key": 1})"), glmp::ParseError);
  EXPECT_ANY_THROW(c.set("no_such_key", "1"));
  EXPECT_ANY_THROW(c.set("hops", "many"));
}

// ---------------------------------------------------------------------------
// Model

TEST(Model, SaveLoadIsBitExact) {
  auto c = tiny_config();
  auto l = load(c);
  auto vocab = glmp::data::build_vocab(l.train);
  auto m = ga::Model::create(c, vocab, l.entities);
  auto dir = fs::temp_directory_path() / "glmp_test_app_model";
  fs::create_directories(dir);
  m.save(dir / "m.ckpt");
  auto back = ga::Model::load(dir / "m.ckpt");
  EXPECT_EQ(back.encode(), m.encode());
  EXPECT_EQ(back.hash(), m.hash());
  EXPECT_EQ(back.vocab, m.vocab);
  EXPECT_EQ(back.config.to_json(), m.config.to_json());
}

TEST(Model, ConfigMismatchIsVersionError) {
  auto c = tiny_config();
  auto l = load(c);
  auto m = ga::Model::create(c, glmp::data::build_vocab(l.train), l.entities);
  EXPECT_NO_THROW(ga::check_compatible(m, c));
  for (auto mutate : {+[](ga::RunConfig& x) { x.hops = 3; }, +[](ga::RunConfig& x) { x.dim = 20; },
                      +[](ga::RunConfig& x) { x.task = "smd"; }}) {
    auto other = c;
    mutate(other);
    EXPECT_THROW(ga::check_compatible(m, other), glmp::VersionError);
  }
}

TEST(Model, SplitSelection) {
  auto c = tiny_config();
  EXPECT_EQ(ga::split_path(c, ga::Split::kTestOov).filename(), "dialog-babi-task1-API-calls-tst-OOV.txt");
  EXPECT_EQ(ga::parse_split("oov"), ga::Split::kTestOov);
  EXPECT_ANY_THROW(ga::parse_split("holdout"));
  auto smd = ga::defaults_for("smd", 1);
  EXPECT_EQ(ga::split_path(smd, ga::Split::kDev).filename(), "kvret_dev_public.json");
}

// ---------------------------------------------------------------------------
// Training

TEST(Train, DeterministicCheckpointsAndReports) {
  auto c = tiny_config();
  auto l = load(c);
  auto a = ga::train(c, l.train, l.dev, l.entities);
  auto b = ga::train(c, l.train, l.dev, l.entities);
  EXPECT_EQ(a.best.encode(), b.best.encode());
  EXPECT_EQ(ga::evaluate_model(a.best, l.dev).to_text(), ga::evaluate_model(b.best, l.dev).to_text());
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].to_json(), b.history[i].to_json());
  auto threaded = c;
  threaded.threads = 3;
  auto par = ga::train(threaded, l.train, l.dev, l.entities).best;
  par.config.threads = 1;
  EXPECT_EQ(par.encode(), a.best.encode());
  auto reseeded = c;
  reseeded.seed = 6;
  EXPECT_NE(ga::train(reseeded, l.train, l.dev, l.entities).best.hash(), a.best.hash());
}

TEST(Train, AnnealingNeverRaisesRateAndStopsAtFloor) {
  auto c = tiny_config();
  c.epochs = 12;
  c.patience = 100;
  c.lr = 1e-3;
  c.lr_floor = 2.5e-4;
  auto l = load(c);
  auto r = ga::train(c, l.train, l.dev, l.entities);
  ASSERT_FALSE(r.history.empty());
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_LE(r.history[i].lr, r.history[i - 1].lr);
  for (const auto& e : r.history) EXPECT_GE(e.lr, c.lr_floor);
  EXPECT_GE(r.final_lr, c.lr_floor);
}

TEST(Train, StopsWhenDevMetricReachesTarget) {
  auto c = tiny_config();
  c.stop_at = 0.0;
  auto l = load(c);
  auto r = ga::train(c, l.train, l.dev, l.entities);
  EXPECT_EQ(r.history.size(), 1u);
  EXPECT_FALSE(r.stop_reason.empty());
}

TEST(Train, NonFiniteLossNamesTheBatch) {
  auto c = tiny_config();
  c.lr = 1e308;  // first update overflows every parameter
  c.lr_floor = 1.0;
  c.clip_norm = 0.0;
  auto l = load(c);
  try {
    ga::train(c, l.train, l.dev, l.entities);
    FAIL() << "expected TrainingError";
  } catch (const glmp::TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("batch"), std::string::npos) << e.what();
  }
}

// ---------------------------------------------------------------------------
// Attention trace

TEST(Trace, RowsGlobalAndFinalColumnsAreConsistent) {
  auto c = tiny_config();
  c.epochs = 25;
  c.dim = 24;
  c.lr = 5e-3;
  c.lr_floor = 5e-3;
  auto l = load(c);
  auto model = ga::train(c, l.train, l.dev, l.entities).best;
  std::size_t copy_steps = 0;
  for (std::size_t idx = 0; idx < l.dev.size(); ++idx) {
    const auto& sample = l.dev[idx];
    std::ostringstream out;
    ga::write_attention_trace(model, sample, out);
    auto rows = parse_tsv(out.str());
    const std::size_t positions = sample.memory_size() + 1;
    ASSERT_EQ(rows.size() % positions, 0u);
    std::map<std::string, std::string> global;
    for (std::size_t r = 0; r < rows.size(); r += positions) {
      const auto& head = rows[r];
      for (std::size_t i = 0; i < positions; ++i) {
        const auto& row = rows[r + i];
        EXPECT_EQ(row.at("step"), head.at("step"));
        EXPECT_EQ(std::stoul(row.at("position")), i);
        if (r == 0) {
          global[row.at("position")] = row.at("global");
        } else {
          EXPECT_EQ(global[row.at("position")], row.at("global"));
        }
      }
      EXPECT_EQ(rows[r + positions - 1].at("global"), "NA");
      if (head.at("copied") != "-") {
        ++copy_steps;
        std::size_t best = 0;
        for (std::size_t i = 1; i + 1 < positions; ++i)
          if (std::stod(rows[r + i].at("final")) > std::stod(rows[r + best].at("final"))) best = i;
        EXPECT_EQ(std::to_string(best), head.at("copied"));
        EXPECT_EQ(head.at("emitted"), sample.objects()[best]);
      }
    }
  }
  EXPECT_GT(copy_steps, 0u);
}

TEST(Ablation, VariantsChangeOnlyTheirSwitches) {
  auto c = tiny_config();
  c.epochs = 1;
  auto l = load(c);
  auto rows = ga::run_ablation(c, l.train, l.dev, l.dev, l.entities, {"full", "no_h", "no_g"});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NE(rows[0].checkpoint_hash, rows[1].checkpoint_hash);
  EXPECT_NE(rows[0].checkpoint_hash, rows[2].checkpoint_hash);
  EXPECT_ANY_THROW(ga::run_ablation(c, l.train, l.dev, l.dev, l.entities, {"bogus"}));
}
