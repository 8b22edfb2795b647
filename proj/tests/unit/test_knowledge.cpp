// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <numeric>

#include "glmp/errors.hpp"
#include "glmp/knowledge.hpp"
#include "oracles.hpp"

namespace gk = glmp::knowledge;
namespace gn = glmp::numerics;
using gk::Triplet;
using gn::ParamStore;
using gn::Rng;
using gn::Tape;
using gn::Var;

namespace {

constexpr std::size_t kVocab = 12;
constexpr std::size_t kNullWord = 4;

struct Fixture {
  ParamStore ps;
  gk::HopEmbeddings emb;
  std::vector<Triplet> kb, dialogue;

  Fixture(std::size_t hops, std::size_t dim, std::size_t l, std::size_t n, std::uint64_t seed, double scale = 0.5) {
    Rng rng(seed);
    emb = gk::HopEmbeddings::create(ps, hops, kVocab, dim, false, rng, scale);
    auto word = [&] { return static_cast<std::size_t>(rng.below(kVocab)); };
    for (std::size_t i = 0; i < l; ++i) kb.push_back({word(), word(), word()});
    for (std::size_t i = 0; i < n; ++i) dialogue.push_back({word(), word(), word()});
  }
  gk::MemoryStore store(Tape& t) const { return gk::build_memory(t, emb, kb, dialogue, kNullWord); }
  oracle::Memory memory() const { return {kb, dialogue, kNullWord, std::nullopt, std::nullopt}; }
  std::vector<std::string> tables() const { return oracle::hop_tables(emb.hops()); }
};

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

void expect_near(std::span<const double> a, const std::vector<double>& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], tol) << "index " << i;
}

}  // namespace

TEST(BuildMemory, PositionLayout) {
  Fixture f(1, 4, 0, 3, 1);
  Tape t(f.ps, false);
  auto s = f.store(t);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.null_position(), 3u);
  EXPECT_FALSE(s.has_hidden());
  EXPECT_FALSE(s.filtered());
  EXPECT_EQ(s.triplet(3), (Triplet{kNullWord, kNullWord, kNullWord}));
}

TEST(BuildMemory, DuplicatesKept) {
  Fixture f(1, 4, 0, 0, 1);
  f.kb = {{5, 6, 7}, {5, 6, 7}, {5, 6, 7}};
  Tape t(f.ps, false);
  auto s = f.store(t);
  EXPECT_EQ(s.size(), 4u);
  EXPECT_EQ(s.kb_size(), 3u);
}

TEST(BuildMemory, UnknownWordIsVocabularyError) {
  Fixture f(1, 4, 1, 1, 1);
  f.kb[0].object = kVocab;
  Tape t(f.ps, false);
  EXPECT_THROW(f.store(t), glmp::VocabularyError);
}

TEST(ObjectOf, CopiesObjectWordOnly) {
  Fixture f(1, 4, 0, 0, 1);
  f.kb = {{5, 6, 7}};
  f.dialogue = {{8, 9, 10}};
  Tape t(f.ps, false);
  auto s = gk::build_memory(t, f.emb, f.kb, f.dialogue, kNullWord, {"3_miles", "gas"});
  EXPECT_EQ(s.object_of(0), 7u);
  EXPECT_EQ(s.object_of(1), 10u);
  EXPECT_EQ(s.object_word(0), "3_miles");
  EXPECT_EQ(s.object_word(1), "gas");
  EXPECT_THROW(s.object_of(2), glmp::NullCopyError);
  EXPECT_THROW(s.triplet(3), glmp::IndexError);
}

TEST(BowEmbed, ZeroEmbeddingsGiveZero) {
  Fixture f(2, 3, 2, 2, 3);
  for (auto& p : f.ps.parameters()) p.value.fill(0.0);
  Tape t(f.ps, false);
  auto s = f.store(t);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (double x : s.bow_embed(i, 2).value()) EXPECT_EQ(x, 0.0);
}

TEST(BowEmbed, RepeatedWordTriples) {
  Fixture f(1, 3, 0, 0, 3);
  f.kb = {{6, 6, 6}};
  Tape t(f.ps, false);
  auto s = f.store(t);
  const auto& c = f.ps[f.emb.table(2)].value;
  auto v = s.bow_embed(0, 2).to_vector();
  for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(v[j], c.at(6, j) + c.at(6, j) + c.at(6, j));
  EXPECT_THROW(s.bow_embed(2, 1), glmp::IndexError);
  EXPECT_THROW(s.hop_matrix(3), glmp::IndexError);
}

TEST(BowEmbed, ScaleFactorMultiplies) {
  Fixture f(1, 3, 2, 1, 4);
  Tape t(f.ps, false);
  auto plain = f.store(t);
  auto scaled = f.store(t);
  scaled.apply_global_filter(t.constant({0.25, 1.0, 0.5}));
  for (std::size_t k = 1; k <= 2; ++k) {
    auto a = plain.bow_embed(0, k).to_vector();
    auto b = scaled.bow_embed(0, k).to_vector();
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(b[j], a[j] * 0.25);
    EXPECT_EQ(plain.bow_embed(3, k).to_vector(), scaled.bow_embed(3, k).to_vector());
  }
}

TEST(MultiHopRead, IdenticalElementsSplitAttention) {
  Fixture f(1, 3, 0, 0, 5);
  f.kb = {{5, 6, 7}, {5, 6, 7}};
  Tape t(f.ps, false);
  auto s = f.store(t);
  auto tr = gk::multi_hop_read(s, t.constant({0.3, -0.2, 0.9}), false);
  ASSERT_EQ(tr.attention.size(), 1u);
  expect_near(tr.attention[0].value(), {0.5, 0.5}, 1e-15);
}

TEST(MultiHopRead, ZeroEmbeddingsUniformAndIdentityQuery) {
  Fixture f(3, 3, 2, 3, 6);
  for (auto& p : f.ps.parameters()) p.value.fill(0.0);
  Tape t(f.ps, false);
  auto s = f.store(t);
  std::vector<double> q{0.4, 1.0, -2.0};
  auto tr = gk::multi_hop_read(s, t.constant(q), true);
  ASSERT_EQ(tr.queries.size(), 4u);
  for (std::size_t k = 0; k < 3; ++k) {
    expect_near(tr.attention[k].value(), std::vector<double>(6, 1.0 / 6.0), 1e-15);
    expect_near(tr.readouts[k].value(), {0, 0, 0}, 0.0);
  }
  expect_near(tr.queries[3].value(), q, 0.0);
}

TEST(MultiHopRead, MatchesOracle) {
  for (std::size_t hops = 1; hops <= 3; ++hops) {
    for (bool null : {false, true}) {
      Fixture f(hops, 4, 2, 3, 10 + hops);
      Rng rng(hops);
      auto q = random_vec(rng, 4);
      Tape t(f.ps, false);
      auto s = f.store(t);
      auto tr = gk::multi_hop_read(s, t.constant(q), null);
      auto o = oracle::read(f.ps, f.tables(), f.memory(), q, null);
      for (std::size_t k = 0; k < hops; ++k) {
        expect_near(tr.attention[k].value(), o.p[k], 1e-12);
        expect_near(tr.readouts[k].value(), o.o[k], 1e-12);
        expect_near(tr.queries[k + 1].value(), o.q[k + 1], 1e-12);
        EXPECT_NEAR(std::accumulate(o.p[k].begin(), o.p[k].end(), 0.0), 1.0, 1e-9);
      }
    }
  }
}

TEST(MultiHopRead, QueryDimensionMismatch) {
  Fixture f(1, 4, 1, 1, 1);
  Tape t(f.ps, false);
  auto s = f.store(t);
  EXPECT_THROW(gk::multi_hop_read(s, t.constant({1.0, 2.0}), false), glmp::ShapeError);
}

TEST(WriteHidden, ZeroHiddenIsIdentity) {
  Fixture f(2, 3, 2, 2, 7);
  Tape t(f.ps, false);
  auto a = f.store(t);
  auto b = f.store(t);
  b.write_hidden(t.constant(std::vector<double>(6, 0.0), 2, 3));
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.bow_embed(i, k).to_vector(), b.bow_embed(i, k).to_vector());
}

TEST(WriteHidden, AddsToDialogueOnlyAtEveryHop) {
  Fixture f(3, 3, 2, 1, 8);
  Tape t(f.ps, false);
  auto a = f.store(t);
  auto b = f.store(t);
  std::vector<double> v{0.5, -1.0, 2.0};
  b.write_hidden(t.constant(v, 1, 3));
  EXPECT_TRUE(b.has_hidden());
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t i : {0u, 1u, 3u}) EXPECT_EQ(a.bow_embed(i, k).to_vector(), b.bow_embed(i, k).to_vector());
    auto x = a.bow_embed(2, k).to_vector();
    auto y = b.bow_embed(2, k).to_vector();
    for (std::size_t j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(y[j], x[j] + v[j]);
  }
}

TEST(WriteHidden, WrongCountIsShapeError) {
  Fixture f(1, 3, 1, 2, 9);
  Tape t(f.ps, false);
  auto s = f.store(t);
  EXPECT_THROW(s.write_hidden(t.constant(std::vector<double>(3, 0.0), 1, 3)), glmp::ShapeError);
}

TEST(GlobalPointer, ZeroEmbeddingsGiveHalf) {
  Fixture f(2, 3, 2, 2, 10);
  for (auto& p : f.ps.parameters()) p.value.fill(0.0);
  Tape t(f.ps, false);
  auto s = f.store(t);
  auto g = gk::global_pointer(s, t.constant({1.0, 2.0, 3.0}));
  expect_near(g.pointer.value(), std::vector<double>(4, 0.5), 0.0);
}

TEST(GlobalPointer, MatchesOracle) {
  for (std::size_t hops = 1; hops <= 3; ++hops) {
    Fixture f(hops, 4, 3, 1, 20 + hops);
    Rng rng(hops + 100);
    auto q = random_vec(rng, 4);
    Tape t(f.ps, false);
    auto s = f.store(t);
    auto g = gk::global_pointer(s, t.constant(q));
    auto [G, readout] = oracle::global_pointer(f.ps, f.tables(), f.memory(), q);
    expect_near(g.pointer.value(), G, 1e-12);
    expect_near(g.readout.value(), readout, 1e-12);
    for (double x : g.pointer.value()) {
      EXPECT_GT(x, 0.0);
      EXPECT_LT(x, 1.0);
    }
  }
}

TEST(GlobalPointer, RejectsFilteredStore) {
  Fixture f(1, 3, 1, 1, 1);
  Tape t(f.ps, false);
  auto s = f.store(t);
  s.apply_global_filter(t.constant({0.5, 0.5}));
  EXPECT_ANY_THROW(gk::global_pointer(s, t.constant({1.0, 0.0, 0.0})));
}

TEST(GlobalFilter, OnesAreIdentity) {
  Fixture f(2, 3, 2, 2, 11);
  Rng rng(1);
  auto q = random_vec(rng, 3);
  Tape t(f.ps, false);
  auto a = f.store(t);
  auto b = f.store(t);
  b.apply_global_filter(t.constant(std::vector<double>(4, 1.0)));
  auto ra = gk::local_pointer_query(a, t.constant(q));
  auto rb = gk::local_pointer_query(b, t.constant(q));
  EXPECT_EQ(ra.distribution.to_vector(), rb.distribution.to_vector());
}

TEST(GlobalFilter, ZeroFactorGivesZeroLogitAndNoReadout) {
  Fixture f(1, 3, 2, 1, 12);
  Rng rng(2);
  auto q = random_vec(rng, 3);
  Tape t(f.ps, false);
  auto s = f.store(t);
  s.apply_global_filter(t.constant({1.0, 0.0, 1.0}));
  for (double x : s.bow_embed(1, 2).value()) EXPECT_EQ(x, 0.0);
  auto tr = gk::multi_hop_read(s, t.constant(q), true);
  // logit 0 for the zeroed slot: its weight is exp(0)/Z, not 0
  auto m1 = s.hop_matrix(1);
  std::vector<double> logits;
  for (std::size_t i = 0; i < 4; ++i) logits.push_back(oracle::dot(q, s.bow_embed(i, 1).to_vector()));
  EXPECT_EQ(logits[1], 0.0);
  expect_near(tr.attention[0].value(), oracle::softmax(logits), 1e-15);
  EXPECT_GT(tr.attention[0][1], 0.0);
}

TEST(GlobalFilter, WrongLengthOrTwiceRejected) {
  Fixture f(1, 3, 2, 1, 13);
  Tape t(f.ps, false);
  auto s = f.store(t);
  EXPECT_THROW(s.apply_global_filter(t.constant({1.0, 1.0})), glmp::ShapeError);
  s.apply_global_filter(t.constant({1.0, 1.0, 1.0}));
  EXPECT_ANY_THROW(s.apply_global_filter(t.constant({1.0, 1.0, 1.0})));
}

TEST(GlobalFilter, CommutesWithPremultipliedEmbeddings) {
  Fixture f(2, 4, 3, 2, 14);
  Rng rng(3);
  auto q = random_vec(rng, 4);
  std::vector<double> g{0.1, 0.9, 0.5, 0.3, 0.7};
  auto m = f.memory();
  m.scales = g;
  auto o = oracle::read(f.ps, f.tables(), m, q, true);
  Tape t(f.ps, false);
  auto s = f.store(t);
  s.apply_global_filter(t.constant(g));
  auto tr = gk::local_pointer_query(s, t.constant(q));
  expect_near(tr.distribution.value(), o.p.back(), 1e-12);
}

TEST(LocalPointer, SimplexOverAllPositions) {
  Fixture f(3, 4, 3, 4, 15);
  Rng rng(4);
  Tape t(f.ps, false);
  auto s = f.store(t);
  s.apply_global_filter(t.constant({0.2, 0.4, 0.6, 0.8, 0.1, 0.3, 0.5}));
  auto step = gk::local_pointer_query(s, t.constant(random_vec(rng, 4)));
  EXPECT_EQ(step.distribution.size(), 8u);
  double sum = 0.0;
  for (double x : step.distribution.value()) {
    EXPECT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(LocalPointer, AlignedNullWins) {
  Fixture f(1, 3, 2, 2, 16);
  for (auto& p : f.ps.parameters()) p.value.fill(0.0);
  for (std::size_t k = 1; k <= 2; ++k) f.ps[f.emb.table(k)].value.at(kNullWord, 0) = 5.0;
  Tape t(f.ps, false);
  auto s = f.store(t);
  auto step = gk::local_pointer_query(s, t.constant({1.0, 0.0, 0.0}));
  auto d = step.distribution.to_vector();
  EXPECT_EQ(std::max_element(d.begin(), d.end()) - d.begin(), 4);
}

TEST(Gradients, ComposedReadMatchesFiniteDifferences) {
  Fixture f(2, 3, 2, 2, 17);
  Rng rng(5);
  f.ps.add_uniform("q", {3}, rng, 1.0);
  f.ps.add_uniform("h", {2, 3}, rng, 0.5);
  f.ps.add_uniform("dec", {3}, rng, 1.0);
  std::vector<int> labels{1, 0, 0, 1};
  auto build = [&](Tape& t) {
    auto s = f.store(t);
    s.write_hidden(gn::param_vector(t, f.ps.id("h")));
    auto g = gk::global_pointer(s, gn::param_vector(t, f.ps.id("q")));
    Var loss = gn::binary_cross_entropy(g.pointer, labels, 1e-12);
    s.apply_global_filter(g.pointer);
    auto step = gk::local_pointer_query(s, gn::add(gn::param_vector(t, f.ps.id("dec")), g.readout));
    return gn::add(loss, gn::neg_log_at(step.distribution, 2, 1e-12));
  };
  auto r = oracle::check_gradients(f.ps, build);
  EXPECT_LE(r.max_rel_error, 1e-4) << r.worst;
}

TEST(HopEmbeddings, TiedTablesShareOneParameter) {
  ParamStore ps;
  Rng rng(1);
  auto e = gk::HopEmbeddings::create(ps, 3, kVocab, 4, true, rng);
  EXPECT_EQ(ps.size(), 1u);
  EXPECT_EQ(e.hops(), 3u);
  EXPECT_EQ(e.table(1), e.table(4));
  auto looked = gk::HopEmbeddings::lookup(ps, 3, true);
  EXPECT_EQ(looked.tables, e.tables);
  ParamStore untied;
  gk::HopEmbeddings::create(untied, 3, kVocab, 4, false, rng);
  EXPECT_EQ(untied.size(), 4u);
}
