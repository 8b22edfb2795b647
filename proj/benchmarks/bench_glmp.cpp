// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "glmp/decoder.hpp"
#include "glmp/knowledge.hpp"
#include "glmp/numerics/adam.hpp"

namespace gd = glmp::decoder;
namespace gk = glmp::knowledge;
namespace gn = glmp::numerics;

namespace {

constexpr std::size_t kVocab = 400;

struct Setup {
  gn::ParamStore ps;
  gd::ModelParams params;
  glmp::data::Vocabulary vocab;
  glmp::data::EncodedSample sample;

  Setup(std::size_t dim, std::size_t hops, std::size_t kb, std::size_t history, std::size_t response) {
    gn::Rng rng(1);
    for (std::size_t i = vocab.size(); i < kVocab; ++i)
      vocab.add(i < 20 ? "@slot" + std::to_string(i) : "w" + std::to_string(i));
    params = gd::ModelParams::create(ps, {vocab.size(), dim, hops, false, 0.1}, rng);
    const std::size_t lo = glmp::data::Vocabulary::kReservedCount;
    auto word = [&] { return lo + rng.below(vocab.size() - lo); };
    for (std::size_t i = 0; i < kb; ++i) sample.kb.push_back({word(), word(), word()});
    for (std::size_t i = 0; i < history; ++i) {
      sample.dialogue.push_back({word(), word(), word()});
      sample.history.push_back(sample.dialogue.back().object);
    }
    for (const auto& t : sample.kb) sample.objects.push_back(vocab.word(t.object));
    for (const auto& t : sample.dialogue) sample.objects.push_back(vocab.word(t.object));
    for (std::size_t t = 0; t < response; ++t) {
      const auto& y = sample.objects[rng.below(sample.objects.size())];
      sample.gold.push_back(y);
      sample.sketch.push_back(vocab.id(y));
    }
    sample.sketch.push_back(glmp::data::Vocabulary::kEos);
    sample.global_label = gd::global_label_from_objects(sample.gold, sample.objects);
    sample.local_label = gd::local_labels_from_objects(sample.gold, sample.objects);
    sample.local_label.push_back(sample.objects.size());
  }
};

void BM_MultiHopRead(benchmark::State& state) {
  const auto hops = static_cast<std::size_t>(state.range(0));
  const auto positions = static_cast<std::size_t>(state.range(1));
  Setup s(128, hops, positions / 2, positions / 2, 1);
  std::vector<double> q(128, 0.01);
  for (auto _ : state) {
    gn::Tape tape(s.ps, false);
    auto store = gk::build_memory(tape, s.params.memory, s.sample.kb, s.sample.dialogue,
                                  glmp::data::Vocabulary::kNull);
    auto trace = gk::multi_hop_read(store, tape.constant(q), true);
    benchmark::DoNotOptimize(trace.queries.back().value().data());
  }
}
BENCHMARK(BM_MultiHopRead)->ArgsProduct({{1, 3, 6}, {32, 128}});

void BM_JointLossForward(benchmark::State& state) {
  Setup s(static_cast<std::size_t>(state.range(0)), 1, 60, 40, 10);
  for (auto _ : state) {
    gn::Tape tape(s.ps, false);
    benchmark::DoNotOptimize(gd::joint_loss(tape, s.params, s.sample).value());
  }
}
BENCHMARK(BM_JointLossForward)->Arg(64)->Arg(128);

void BM_JointLossBackward(benchmark::State& state) {
  Setup s(static_cast<std::size_t>(state.range(0)), 1, 60, 40, 10);
  gn::GradientBuffer grads(s.ps);
  for (auto _ : state) {
    gn::Tape tape(s.ps);
    auto loss = gd::joint_loss(tape, s.params, s.sample);
    tape.backward(loss.total, grads);
  }
}
BENCHMARK(BM_JointLossBackward)->Arg(64)->Arg(128);

void BM_GreedyDecode(benchmark::State& state) {
  Setup s(128, static_cast<std::size_t>(state.range(0)), 60, 40, 10);
  for (auto _ : state) benchmark::DoNotOptimize(gd::infer(s.ps, s.params, s.vocab, s.sample, 20).tokens.size());
}
BENCHMARK(BM_GreedyDecode)->Arg(1)->Arg(3);

void BM_AdamStep(benchmark::State& state) {
  Setup s(128, 1, 1, 1, 1);
  gn::GradientBuffer grads(s.ps);
  {
    gn::Tape tape(s.ps);
    auto loss = gd::joint_loss(tape, s.params, s.sample);
    tape.backward(loss.total, grads);
  }
  for (auto _ : state) gn::adam_step(s.ps, grads, 1e-6);
}
BENCHMARK(BM_AdamStep);

}  // namespace

BENCHMARK_MAIN();
