// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "glmp/data/entities.hpp"
#include "glmp/eval.hpp"
#include "glmp/numerics/rng.hpp"

namespace ge = glmp::eval;
using ge::Tokens;
using glmp::data::EntityTable;

namespace {

std::vector<Tokens> read_lines(const char* name) {
  std::ifstream in(std::string(GLMP_FIXTURES) + "/" + name);
  std::vector<Tokens> out;
  for (std::string line; std::getline(in, line);) {
    std::istringstream ss(line);
    Tokens t;
    for (std::string w; ss >> w;) t.push_back(w);
    out.push_back(t);
  }
  return out;
}

struct EntityFixture {
  EntityTable table;
  std::vector<Tokens> gold;
  std::vector<std::string> domains;
};

EntityFixture load_entities() {
  std::ifstream in(std::string(GLMP_FIXTURES) + "/metric_entities.json");
  auto j = nlohmann::json::parse(in);
  EntityFixture f;
  for (auto& [k, v] : j["table"].items()) f.table.add(k, v.get<std::string>());
  for (auto& r : j["responses"]) {
    f.gold.push_back(r["gold"].get<Tokens>());
    f.domains.push_back(r["domain"].get<std::string>());
  }
  return f;
}

Tokens split(const std::string& s) {
  std::istringstream ss(s);
  Tokens t;
  for (std::string w; ss >> w;) t.push_back(w);
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Accuracy and completion

TEST(Accuracy, AllExact) {
  std::vector<Tokens> g{split("a b"), split("c")};
  EXPECT_EQ(ge::per_response_accuracy(g, g), 1.0);
  EXPECT_EQ(ge::completion(g, g, {"d1", "d2"}), 1.0);
}

TEST(Accuracy, OneWrongOfSix) {
  std::vector<Tokens> gold{split("a"), split("b"), split("c"), split("d"), split("e"), split("f")};
  auto pred = gold;
  pred[1] = split("x");
  const std::vector<std::string> ids{"d1", "d1", "d1", "d2", "d2", "d2"};
  EXPECT_DOUBLE_EQ(ge::per_response_accuracy(pred, gold), 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(ge::completion(pred, gold, ids), 0.5);
}

TEST(Accuracy, ErrorsOnEmptyOrMismatch) {
  EXPECT_THROW(ge::per_response_accuracy({}, {}), std::invalid_argument);
  EXPECT_THROW(ge::per_response_accuracy({split("a")}, {}), std::invalid_argument);
  EXPECT_THROW(ge::completion({split("a")}, {split("a")}, {}), std::invalid_argument);
}

TEST(Accuracy, CompletionBiconditionalAtBoundary) {
  glmp::numerics::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Tokens> gold, pred;
    std::vector<std::string> ids;
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back({std::to_string(rng.below(3))});
      pred.push_back(rng.bernoulli(0.9) ? gold.back() : Tokens{"wrong"});
      ids.push_back("d" + std::to_string(rng.below(3)));
    }
    const double acc = ge::per_response_accuracy(pred, gold);
    const double comp = ge::completion(pred, gold, ids);
    EXPECT_EQ(acc == 1.0, comp == 1.0);
  }
}

// ---------------------------------------------------------------------------
// BLEU

TEST(Bleu, IdenticalIsHundred) {
  std::vector<Tokens> g{split("the cat sat on the mat"), split("a b c d e")};
  EXPECT_NEAR(ge::bleu(g, g), 100.0, 1e-9);
}

TEST(Bleu, NoSharedUnigramIsZero) {
  EXPECT_EQ(ge::bleu({split("x y z w")}, {split("a b c d")}), 0.0);
  EXPECT_THROW(ge::bleu({}, {}), std::invalid_argument);
}

TEST(Bleu, ThreeSentenceFixture) {
  auto hyp = read_lines("metric_hyp.txt");
  auto ref = read_lines("metric_ref.txt");
  hyp.resize(3);
  ref.resize(3);
  EXPECT_NEAR(ge::bleu(hyp, ref), 40.66153218910275, 0.01);
}

TEST(Bleu, TenSentenceFixtureCounts) {
  auto s = ge::bleu_stats(read_lines("metric_hyp.txt"), read_lines("metric_ref.txt"));
  EXPECT_EQ(s.matches, (std::array<std::size_t, 4>{59, 38, 24, 16}));
  EXPECT_EQ(s.totals, (std::array<std::size_t, 4>{69, 59, 49, 40}));
  EXPECT_EQ(s.hypothesis_length, 69u);
  EXPECT_EQ(s.reference_length, 79u);
  EXPECT_NEAR(s.brevity_penalty, 0.8650849781567743, 1e-12);
  EXPECT_NEAR(s.score, 49.58053234442031, 0.01);
}

TEST(Bleu, PermutationInvariant) {
  auto hyp = read_lines("metric_hyp.txt");
  auto ref = read_lines("metric_ref.txt");
  const double base = ge::bleu(hyp, ref);
  std::reverse(hyp.begin(), hyp.end());
  std::reverse(ref.begin(), ref.end());
  EXPECT_DOUBLE_EQ(ge::bleu(hyp, ref), base);
}

// ---------------------------------------------------------------------------
// Entity F1

TEST(EntityF1, ExactAndHalf) {
  EntityTable t;
  for (const char* e : {"a", "b", "c"}) t.add(e, "slot");
  auto exact = ge::entity_f1({split("x a y b")}, {{"a", "b"}}, {"navigation"}, t);
  EXPECT_EQ(exact.overall.f1(), 1.0);
  auto half = ge::entity_f1({split("a c")}, {{"a", "b"}}, {"navigation"}, t);
  EXPECT_DOUBLE_EQ(half.overall.precision(), 0.5);
  EXPECT_DOUBLE_EQ(half.overall.recall(), 0.5);
  EXPECT_DOUBLE_EQ(half.overall.f1(), 0.5);
}

TEST(EntityF1, ResponsesWithoutGoldContributeNothing) {
  EntityTable t;
  t.add("a", "slot");
  auto r = ge::entity_f1({split("a a a")}, {{}}, {"weather"}, t);
  EXPECT_TRUE(r.overall.undefined());
  EXPECT_EQ(r.overall.f1(), 0.0);
  EXPECT_THROW(ge::entity_f1({split("a")}, {{"a"}}, {"space"}, t), std::invalid_argument);
}

TEST(EntityF1, FrozenFixture) {
  auto f = load_entities();
  auto r = ge::entity_f1(read_lines("metric_hyp.txt"), f.gold, f.domains, f.table);
  EXPECT_EQ(r.overall.tp, 17u);
  EXPECT_EQ(r.overall.fp, 5u);
  EXPECT_EQ(r.overall.fn, 8u);
  EXPECT_NEAR(r.overall.f1(), 34.0 / 47.0, 0.01);
  EXPECT_NEAR(r.per_domain.at("navigation").f1(), 12.0 / 19.0, 0.01);
  EXPECT_NEAR(r.per_domain.at("schedule").f1(), 2.0 / 3.0, 0.01);
  EXPECT_NEAR(r.per_domain.at("weather").f1(), 12.0 / 13.0, 0.01);
  ge::F1Counts sum;
  for (const auto& [d, c] : r.per_domain) sum += c;
  EXPECT_EQ(sum.tp, r.overall.tp);
  EXPECT_EQ(sum.fp, r.overall.fp);
  EXPECT_EQ(sum.fn, r.overall.fn);
}

TEST(EntityF1, MatchesBruteForceSetsOnRandomFixtures) {
  glmp::numerics::Rng rng(17);
  const Tokens words{"e0", "e1", "e2", "e3", "e4", "w0", "w1", "w2"};
  EntityTable t;
  for (int i = 0; i < 5; ++i) t.add("e" + std::to_string(i), "slot");
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Tokens> pred, gold;
    std::vector<std::string> doms;
    std::size_t tp = 0, fp = 0, fn = 0;
    const std::size_t n = 1 + rng.below(6);
    for (std::size_t i = 0; i < n; ++i) {
      Tokens p, g;
      for (std::size_t k = rng.below(6); k > 0; --k) p.push_back(words[rng.below(words.size())]);
      std::set<std::string> gs;
      for (std::size_t k = rng.below(3); k > 0; --k) gs.insert("e" + std::to_string(rng.below(5)));
      g.assign(gs.begin(), gs.end());
      pred.push_back(p);
      gold.push_back(g);
      doms.push_back(ge::kDomains[rng.below(4)]);
      if (g.empty()) continue;
      std::set<std::string> ps;
      for (const auto& w : p)
        if (t.contains(w)) ps.insert(w);
      for (const auto& e : gs) (ps.contains(e) ? tp : fn)++;
      for (const auto& e : ps) fp += !gs.contains(e);
    }
    auto r = ge::entity_f1(pred, gold, doms, t);
    EXPECT_EQ(r.overall.tp, tp);
    EXPECT_EQ(r.overall.fp, fp);
    EXPECT_EQ(r.overall.fn, fn);
    // permutation invariance
    std::reverse(pred.begin(), pred.end());
    std::reverse(gold.begin(), gold.end());
    std::reverse(doms.begin(), doms.end());
    auto rev = ge::entity_f1(pred, gold, doms, t);
    EXPECT_EQ(rev.overall.tp, tp);
    EXPECT_EQ(rev.overall.fp, fp);
  }
}

// ---------------------------------------------------------------------------
// Report

TEST(Report, StableKeysAndFractions) {
  glmp::data::DialogueSample s;
  s.dialogue_id = "d:1";
  s.domain = "navigation";
  s.gold = split("valero is 4_miles away");
  s.entities = {"valero", "4_miles"};
  EntityTable t;
  t.add("valero", "poi");
  t.add("4_miles", "distance");
  auto report = ge::evaluate({s, s}, {s.gold, split("valero is far")}, t);
  auto e = report.entries();
  for (const char* k : {"samples", "dialogues", "per_response_accuracy", "completion_rate", "bleu", "entity_f1",
                        "entity_f1.navigation", "entity_f1.weather"}) {
    EXPECT_TRUE(e.contains(k)) << k;
  }
  EXPECT_EQ(e.at("samples"), "2");
  EXPECT_EQ(e.at("per_response_accuracy"), "0.500000");
  EXPECT_EQ(e.at("completion_rate"), "0.000000");
  EXPECT_EQ(report.to_text(), report.to_text());
  auto j = nlohmann::json::parse(report.to_json());
  EXPECT_DOUBLE_EQ(j["per_response_accuracy"].get<double>(), 0.5);
  for (double v : {report.per_response_accuracy, report.completion_rate, report.entity.overall.f1()}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}
