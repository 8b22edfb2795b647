// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>

#include "glmp/errors.hpp"
#include "glmp/numerics/adam.hpp"
#include "glmp/numerics/checkpoint.hpp"
#include "glmp/numerics/gru.hpp"
#include "glmp/numerics/params.hpp"
#include "glmp/numerics/rng.hpp"
#include "glmp/numerics/tape.hpp"
#include "oracles.hpp"

namespace gn = glmp::numerics;
using gn::GradientBuffer;
using gn::ParamStore;
using gn::Rng;
using gn::Tape;
using gn::Tensor;
using gn::Var;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-scale, scale);
  return v;
}

Var vec_param(Tape& tape, const ParamStore& ps, const std::string& name) {
  return gn::param_vector(tape, ps.id(name));
}

}  // namespace

TEST(Tensor, ValueCountMatchesShape) {
  Tensor t({3, 4});
  EXPECT_EQ(t.size(), 12u);
  EXPECT_EQ(t.rows(), 3u);
  EXPECT_EQ(t.cols(), 4u);
  t.at(2, 3) = 7.0;
  EXPECT_EQ(t[11], 7.0);
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>(3)), glmp::ShapeError);
  t[0] = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(t.all_finite());
}

TEST(Softmax, UniformOnEqualScores) {
  auto p = gn::softmax(std::vector<double>{0, 0, 0});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Softmax, LogTwoGapGivesOneThirdTwoThirds) {
  const double a = 1.7;
  auto p = gn::softmax(std::vector<double>{a, a + std::log(2.0)});
  EXPECT_NEAR(p[0], 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 2.0 / 3.0, 1e-15);
}

TEST(Softmax, MatchesDirectFormulaAndIsShiftInvariant) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto v = random_vec(rng, 7, 5.0);
    auto p = gn::softmax(v);
    double z = 0.0;
    for (double x : v) z += std::exp(x);
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    auto shifted = v;
    for (auto& x : shifted) x += 123.0;
    auto q = gn::softmax(shifted);
    for (std::size_t i = 0; i < v.size(); ++i) {
      EXPECT_NEAR(p[i], std::exp(v[i]) / z, 1e-14);
      EXPECT_NEAR(p[i], q[i], 1e-14);
    }
  }
}

TEST(Softmax, EmptyInputRejected) {
  EXPECT_THROW(gn::softmax(std::vector<double>{}), std::invalid_argument);
}

TEST(Sigmoid, ClosedForms) {
  EXPECT_EQ(gn::sigmoid(0.0), 0.5);
  EXPECT_NEAR(gn::sigmoid(std::log(3.0)), 0.75, 1e-15);
  for (double x : {0.1, 1.0, 4.0, 30.0}) EXPECT_NEAR(gn::sigmoid(x) + gn::sigmoid(-x), 1.0, 1e-15);
  EXPECT_GT(gn::sigmoid(-700.0), 0.0);
  EXPECT_LE(gn::sigmoid(700.0), 1.0);
}

TEST(Backward, SumGivesOnes) {
  ParamStore ps;
  Rng rng(1);
  auto w = ps.add_uniform("w", {5}, rng);
  GradientBuffer g(ps);
  Tape tape(ps);
  tape.backward(gn::sum(gn::param_vector(tape, w)), g);
  const auto grad = g.gradient(w);
  for (double x : grad.values()) EXPECT_EQ(x, 1.0);
}

TEST(Backward, DotSwapsOperands) {
  ParamStore ps;
  Rng rng(2);
  auto a = ps.add_uniform("a", {4}, rng);
  auto b = ps.add_uniform("b", {4}, rng);
  auto c = ps.add_uniform("unused", {3}, rng);
  GradientBuffer g(ps);
  Tape tape(ps);
  tape.backward(gn::dot(gn::param_vector(tape, a), gn::param_vector(tape, b)), g);
  EXPECT_EQ(g.gradient(a), ps[b].value);
  EXPECT_EQ(g.gradient(b), ps[a].value);
  const auto unused = g.gradient(c);
  for (double x : unused.values()) EXPECT_EQ(x, 0.0);
}

TEST(Backward, NonScalarLossRejected) {
  ParamStore ps;
  Rng rng(3);
  auto a = ps.add_uniform("a", {4}, rng);
  GradientBuffer g(ps);
  Tape tape(ps);
  EXPECT_THROW(tape.backward(gn::param_vector(tape, a), g), glmp::ShapeError);
  Tape frozen(ps, false);
  EXPECT_THROW(frozen.backward(gn::sum(gn::param_vector(frozen, a)), g), glmp::InternalError);
}

TEST(Backward, ForeignTapeInputRejected) {
  ParamStore ps;
  Rng rng(3);
  auto a = ps.add_uniform("a", {4}, rng);
  Tape t1(ps);
  Tape t2(ps);
  Var x = gn::param_vector(t1, a);
  Var y = gn::param_vector(t2, a);
  EXPECT_THROW(gn::add(x, y), glmp::InternalError);
}

// Every differentiable op against central differences.
TEST(Backward, ElementwiseOpsMatchFiniteDifferences) {
  ParamStore ps;
  Rng rng(5);
  ps.add_uniform("a", {6}, rng, 1.0);
  ps.add_uniform("b", {6}, rng, 1.0);
  auto build = [&](Tape& t) {
    Var a = vec_param(t, ps, "a");
    Var b = vec_param(t, ps, "b");
    Var x = gn::mul(gn::tanh(a), gn::sigmoid(b));
    x = gn::add(x, gn::scale(gn::sub(a, b), 0.3));
    x = gn::mul(x, gn::one_minus(gn::sigmoid(a)));
    x = gn::mul_const(x, {1, 2, 0, 1, 0.5, 3});
    return gn::add(gn::dot(x, x), gn::sum(gn::concat(x, b)));
  };
  auto r = oracle::check_gradients(ps, build);
  EXPECT_LE(r.max_rel_error, 1e-6) << r.worst;
}

TEST(Backward, MatrixOpsMatchFiniteDifferences) {
  ParamStore ps;
  Rng rng(6);
  auto table = ps.add_uniform("table", {7, 3}, rng, 1.0);
  auto w = ps.add_uniform("w", {3, 3}, rng, 1.0);
  auto w2 = ps.add_uniform("w2", {3, 6}, rng, 1.0);
  auto bias = ps.add_uniform("bias", {3}, rng, 1.0);
  ps.add_uniform("q", {3}, rng, 1.0);
  ps.add_uniform("g", {2}, rng, 1.0);
  auto build = [&](Tape& t) {
    std::vector<std::size_t> ids{1, 2, 2, 6, 0, 4, 3, 3, 3};
    Var m = gn::bag_of_rows(t, table, ids, 3);
    Var q = vec_param(t, ps, "q");
    Var e = gn::embedding(t, table, 5);
    Var block = gn::stack_rows(t, std::vector<Var>{gn::matvec(t, w, e)});
    m = gn::add_rows(m, block, 1);
    m = gn::scale_rows(m, gn::sigmoid(vec_param(t, ps, "g")));
    Var p = gn::softmax(gn::row_dots(m, q, 3));
    Var o = gn::weighted_row_sum(m, p);
    Var h = gn::linear(t, {{w, o}, {w2, gn::concat(q, gn::row(m, 2))}}, &bias);
    return gn::add(gn::neg_log_at(gn::softmax(h), 1, 1e-12), gn::dot(h, o));
  };
  auto r = oracle::check_gradients(ps, build);
  EXPECT_LE(r.max_rel_error, 1e-6) << r.worst;
}

TEST(Backward, BinaryCrossEntropyMatchesFiniteDifferences) {
  ParamStore ps;
  Rng rng(7);
  ps.add_uniform("s", {5}, rng, 2.0);
  std::vector<int> labels{1, 0, 0, 1, 1};
  auto build = [&](Tape& t) { return gn::binary_cross_entropy(gn::sigmoid(vec_param(t, ps, "s")), labels, 1e-12); };
  auto r = oracle::check_gradients(ps, build);
  EXPECT_LE(r.max_rel_error, 1e-6) << r.worst;
}

TEST(Backward, FlooredLogHasZeroGradient) {
  ParamStore ps;
  ps.add("p", Tensor({2}, {0.0, 1.0}));
  GradientBuffer g(ps);
  Tape tape(ps);
  Var loss = gn::neg_log_at(vec_param(tape, ps, "p"), 0, 1e-12);
  EXPECT_NEAR(loss.scalar(), -std::log(1e-12), 1e-9);
  tape.backward(loss, g);
  EXPECT_EQ(g.gradient(ps.id("p"))[0], 0.0);
}

TEST(Dropout, InvertedScalingAndIdentityAtZero) {
  ParamStore ps;
  ps.add("x", Tensor({2000}, 1.0));
  Tape tape(ps, false);
  Rng rng(9);
  Var x = vec_param(tape, ps, "x");
  Var same = gn::dropout(x, 0.0, rng);
  for (double v : same.value()) EXPECT_EQ(v, 1.0);
  Var d = gn::dropout(x, 0.25, rng);
  std::size_t kept = 0;
  for (double v : d.value()) {
    if (v != 0.0) {
      EXPECT_NEAR(v, 1.0 / 0.75, 1e-15);
      ++kept;
    }
  }
  // 3 sigma of binomial(2000, 0.75)
  EXPECT_NEAR(static_cast<double>(kept), 1500.0, 3.0 * std::sqrt(2000 * 0.75 * 0.25));
  EXPECT_THROW(gn::dropout(x, 1.0, rng), std::invalid_argument);
}

TEST(Gru, ZeroParamsZeroState) {
  ParamStore ps;
  Rng rng(1);
  auto p = gn::GruParams::create(ps, "cell", 3, 4, rng);
  for (auto& prm : ps.parameters()) prm.value.fill(0.0);
  Tape tape(ps, false);
  Var x = tape.constant({0.3, -1.0, 2.0});
  Var h = gn::gru_cell(tape, p, x, tape.constant(std::vector<double>(4, 0.0)));
  for (double v : h.value()) EXPECT_EQ(v, 0.0);
  Var h2 = gn::gru_cell(tape, p, x, tape.constant({1.0, -2.0, 0.5, 4.0}));
  EXPECT_EQ(h2.to_vector(), (std::vector<double>{0.5, -1.0, 0.25, 2.0}));
}

TEST(Gru, MatchesUnrolledOracle) {
  ParamStore ps;
  Rng rng(21);
  auto p = gn::GruParams::create(ps, "cell", 3, 4, rng, 0.5);
  Tape tape(ps, false);
  std::vector<double> h(4, 0.0);
  Var hv = tape.constant(h);
  for (int t = 0; t < 5; ++t) {
    auto x = random_vec(rng, 3);
    hv = gn::gru_cell(tape, p, tape.constant(x), hv);
    h = oracle::gru(ps, "cell", x, h);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(hv[i], h[i], 1e-14);
  }
}

TEST(Gru, DimensionMismatchIsShapeError) {
  ParamStore ps;
  Rng rng(1);
  auto p = gn::GruParams::create(ps, "cell", 3, 4, rng);
  Tape tape(ps, false);
  EXPECT_THROW(gn::gru_cell(tape, p, tape.constant({1.0, 2.0}), tape.constant(std::vector<double>(4, 0.0))),
               glmp::ShapeError);
  EXPECT_THROW(gn::gru_cell(tape, p, tape.constant({1.0, 2.0, 3.0}), tape.constant(std::vector<double>(3, 0.0))),
               glmp::ShapeError);
}

TEST(Gru, JacobianMatchesFiniteDifferences) {
  ParamStore ps;
  Rng rng(4);
  auto p = gn::GruParams::create(ps, "cell", 4, 4, rng, 0.5);
  ps.add_uniform("x", {4}, rng, 1.0);
  ps.add_uniform("h", {4}, rng, 1.0);
  ps.add_uniform("proj", {4}, rng, 1.0);
  auto build = [&](Tape& t) {
    Var h = gn::gru_cell(t, p, vec_param(t, ps, "x"), vec_param(t, ps, "h"));
    return gn::dot(h, vec_param(t, ps, "proj"));
  };
  auto r = oracle::check_gradients(ps, build);
  EXPECT_LT(r.max_rel_error, 1e-6) << r.worst;
}

TEST(Adam, ZeroGradientLeavesParamsUnchanged) {
  ParamStore ps;
  Rng rng(1);
  ps.add_uniform("w", {3, 2}, rng);
  const ParamStore before = ps;
  GradientBuffer g(ps);
  gn::adam_step(ps, g, 1e-3);
  EXPECT_EQ(ps.parameters()[0].value, before.parameters()[0].value);
  EXPECT_EQ(ps.step(), before.step() + 1);
}

TEST(Adam, FirstStepMovesByLearningRate) {
  for (double g0 : {3.0, -0.02, 1e-3}) {
    ParamStore ps;
    ps.add("w", Tensor({1}, 0.5));
    GradientBuffer g(ps);
    g.slot(ps.id("w"))[0] = g0;
    gn::adam_step(ps, g, 0.01);
    const double delta = ps.get("w").value[0] - 0.5;
    EXPECT_NEAR(delta, -0.01 * g0 / (std::abs(g0) + 1e-8), 1e-15);
  }
}

TEST(Adam, MatchesScalarRecurrenceOnQuadratic) {
  ParamStore ps;
  ps.add("w", Tensor({1}, 1.0));
  double w = 1.0, m = 0.0, v = 0.0;
  double prev = 1.0;
  for (int t = 1; t <= 10; ++t) {
    GradientBuffer g(ps);
    g.slot(ps.id("w"))[0] = 2.0 * ps.get("w").value[0];
    gn::adam_step(ps, g, 0.1);
    const double grad = 2.0 * w;
    m = 0.9 * m + 0.1 * grad;
    v = 0.999 * v + 0.001 * grad * grad;
    w -= 0.1 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    EXPECT_NEAR(ps.get("w").value[0], w, 1e-15);
    EXPECT_LT(std::abs(w), prev);
    prev = std::abs(w);
  }
}

TEST(Adam, NonFiniteGradientNamesParameter) {
  ParamStore ps;
  Rng rng(1);
  ps.add_uniform("first", {2}, rng);
  ps.add_uniform("second", {2}, rng);
  GradientBuffer g(ps);
  g.slot(ps.id("second"))[1] = std::nan("");
  try {
    gn::adam_step(ps, g, 1e-3);
    FAIL() << "expected TrainingError";
  } catch (const glmp::TrainingError& e) {
    EXPECT_NE(std::string(e.what()).find("second"), std::string::npos);
  }
  EXPECT_EQ(ps.step(), 0u);
}

TEST(Adam, ClipScalesToMaxNorm) {
  ParamStore ps;
  ps.add("w", Tensor({2}, 0.0));
  GradientBuffer g(ps);
  g.slot(ps.id("w"))[0] = 3.0;
  g.slot(ps.id("w"))[1] = 4.0;
  EXPECT_DOUBLE_EQ(gn::clip_grad_norm(g, 1.0), 5.0);
  EXPECT_NEAR(std::sqrt(g.squared_norm()), 1.0, 1e-15);
}

TEST(ParamStore, UniformInitWithinScale) {
  ParamStore ps;
  Rng rng(99);
  auto id = ps.add_uniform("w", {50, 20}, rng, 0.1);
  for (double x : ps[id].value.values()) {
    EXPECT_GE(x, -0.1);
    EXPECT_LE(x, 0.1);
  }
  EXPECT_EQ(ps[id].first_moment.shape(), ps[id].value.shape());
  EXPECT_THROW(ps.add_uniform("w", {1}, rng), std::invalid_argument);
}

TEST(ParamStore, SeedDeterminesValues) {
  auto make = [](std::uint64_t seed) {
    ParamStore ps;
    Rng rng(seed);
    ps.add_uniform("a", {4, 4}, rng);
    return ps;
  };
  EXPECT_TRUE(make(5) == make(5));
  EXPECT_FALSE(make(5) == make(6));
}

TEST(Checkpoint, RoundTripIsBitExact) {
  ParamStore ps(1234);
  Rng rng(8);
  ps.add_uniform("emb", {5, 3}, rng);
  ps.add_uniform("bias", {3}, rng);
  GradientBuffer g(ps);
  g.slot(ps.id("emb"))[2] = 0.7;
  gn::adam_step(ps, g, 1e-3);
  auto bytes = gn::encode_checkpoint(ps, R"({"k":1})");
  auto ck = gn::decode_checkpoint(bytes);
  EXPECT_TRUE(ck.params == ps);
  EXPECT_EQ(ck.metadata, R"({"k":1})");
  EXPECT_EQ(ck.params.seed(), 1234u);
  EXPECT_EQ(ck.params.step(), 1u);
  EXPECT_EQ(gn::encode_checkpoint(ck.params, ck.metadata), bytes);
}

TEST(Checkpoint, CorruptHeaderIsVersionError) {
  ParamStore ps;
  Rng rng(8);
  ps.add_uniform("emb", {2, 2}, rng);
  auto bytes = gn::encode_checkpoint(ps, "");
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(gn::decode_checkpoint(bad_magic), glmp::VersionError);
  auto bad_version = bytes;
  bad_version[8] = 9;
  EXPECT_THROW(gn::decode_checkpoint(bad_version), glmp::VersionError);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  EXPECT_THROW(gn::decode_checkpoint(truncated), glmp::VersionError);
}

TEST(Checkpoint, Fnv1aKnownVectors) {
  EXPECT_EQ(gn::fnv1a64({}), 0xcbf29ce484222325ULL);
  EXPECT_EQ(gn::fnv1a64({'a'}), 0xaf63dc4c8601ec8cULL);
}

TEST(Determinism, SameSeedSameLoss) {
  auto run = [] {
    ParamStore ps;
    Rng rng(77);
    auto p = gn::GruParams::create(ps, "cell", 3, 3, rng);
    Tape t(ps, false);
    Rng drop(5);
    Var h = gn::gru_cell(t, p, gn::dropout(t.constant({1.0, 2.0, 3.0}), 0.3, drop), t.constant({0.1, 0.2, 0.3}));
    return gn::sum(h).scalar();
  };
  EXPECT_EQ(run(), run());
}
