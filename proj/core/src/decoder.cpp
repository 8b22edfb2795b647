// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/decoder.hpp"

#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace glmp::decoder {

using data::Vocabulary;
using numerics::ParamStore;
using numerics::Rng;

namespace {

std::size_t argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

DecoderParams DecoderParams::create(ParamStore& store, std::size_t vocab_size, std::size_t dim, Rng& rng,
                                    double init_scale) {
  DecoderParams p;
  p.init_weight = store.add_uniform("decoder.init.W", {dim, 2 * dim}, rng, init_scale);
  p.init_bias = store.add_uniform("decoder.init.b", {dim}, rng, init_scale);
  p.sketch_rnn = numerics::GruParams::create(store, "decoder.sketch", dim, dim, rng, init_scale);
  p.output = store.add_uniform("decoder.out.W", {vocab_size, dim}, rng, init_scale);
  return p;
}

DecoderParams DecoderParams::lookup(const ParamStore& store) {
  DecoderParams p;
  p.init_weight = store.id("decoder.init.W");
  p.init_bias = store.id("decoder.init.b");
  p.sketch_rnn = numerics::GruParams::lookup(store, "decoder.sketch");
  p.output = store.id("decoder.out.W");
  return p;
}

ModelParams ModelParams::create(ParamStore& store, const ModelConfig& config, Rng& rng) {
  if (config.vocab_size <= Vocabulary::kReservedCount) throw std::invalid_argument("model needs a non-trivial vocabulary");
  ModelParams p;
  p.memory = knowledge::HopEmbeddings::create(store, config.hops, config.vocab_size, config.dim, config.tie_hops, rng,
                                              config.init_scale);
  p.encoder = encoder::EncoderParams::create(store, config.dim, rng, config.init_scale);
  p.decoder = DecoderParams::create(store, config.vocab_size, config.dim, rng, config.init_scale);
  return p;
}

ModelParams ModelParams::lookup(const ParamStore& store, const ModelConfig& config) {
  return {knowledge::HopEmbeddings::lookup(store, config.hops, config.tie_hops), encoder::EncoderParams::lookup(store),
          DecoderParams::lookup(store)};
}

// ---------------------------------------------------------------------------

SketchStep sketch_step(Tape& tape, WordId prev_token, Var h_prev, const knowledge::HopEmbeddings& embeddings,
                       const DecoderParams& params, double dropout, Rng* rng) {
  Var x = numerics::embedding(tape, embeddings.table(1), prev_token);
  if (dropout > 0.0) x = numerics::dropout(x, dropout, *rng);
  SketchStep step;
  step.hidden = numerics::gru_cell(tape, params.sketch_rnn, x, h_prev);
  step.query = dropout > 0.0 ? numerics::dropout(step.hidden, dropout, *rng) : step.hidden;
  step.vocab = numerics::softmax(numerics::matvec(tape, params.output, step.query));
  return step;
}

Var initial_state(Tape& tape, const DecoderParams& params, Var encoded_history, Var kb_readout) {
  return numerics::linear(tape, {{params.init_weight, numerics::concat(encoded_history, kb_readout)}},
                          &params.init_bias);
}

// ---------------------------------------------------------------------------

std::vector<std::string> make_sketch_labels(std::span<const std::string> gold, const SlotLookup& slot_of) {
  std::vector<std::string> out;
  out.reserve(gold.size());
  for (const auto& tok : gold) {
    auto slot = slot_of(tok);
    out.push_back(slot ? "@" + *slot : tok);
  }
  return out;
}

std::vector<int> global_label_from_objects(std::span<const std::string> gold, std::span<const std::string> objects) {
  const std::unordered_set<std::string> words(gold.begin(), gold.end());
  std::vector<int> out(objects.size(), 0);
  for (std::size_t i = 0; i < objects.size(); ++i) out[i] = words.contains(objects[i]) ? 1 : 0;
  return out;
}

std::vector<std::size_t> local_labels_from_objects(std::span<const std::string> gold,
                                                   std::span<const std::string> objects) {
  std::unordered_map<std::string, std::size_t> last;
  for (std::size_t i = 0; i < objects.size(); ++i) last[objects[i]] = i;
  std::vector<std::size_t> out;
  out.reserve(gold.size());
  for (const auto& tok : gold) {
    auto it = last.find(tok);
    out.push_back(it == last.end() ? objects.size() : it->second);
  }
  return out;
}

std::vector<int> make_global_label(std::span<const std::string> gold, const knowledge::MemoryStore& store) {
  return global_label_from_objects(gold, store.object_words());
}

std::vector<std::size_t> make_local_labels(std::span<const std::string> gold, const knowledge::MemoryStore& store) {
  return local_labels_from_objects(gold, store.object_words());
}

// ---------------------------------------------------------------------------

Var loss_g(Var global_pointer, std::span<const int> labels) {
  return numerics::binary_cross_entropy(global_pointer, labels, kProbabilityFloor);
}

namespace {

Var sum_neg_log(Tape& tape, std::span<const Var> dists, std::span<const std::size_t> labels, const char* what) {
  if (dists.size() != labels.size()) {
    throw ShapeError(std::string(what) + ": " + std::to_string(dists.size()) + " distributions for " +
                     std::to_string(labels.size()) + " labels");
  }
  Var total = tape.scalar(0.0);
  for (std::size_t t = 0; t < dists.size(); ++t) {
    total = numerics::add(total, numerics::neg_log_at(dists[t], labels[t], kProbabilityFloor));
  }
  return total;
}

}  // namespace

Var loss_v(Tape& tape, std::span<const Var> vocab_distributions, std::span<const WordId> sketch_labels) {
  return sum_neg_log(tape, vocab_distributions, sketch_labels, "loss_v");
}

Var loss_l(Tape& tape, std::span<const Var> pointer_distributions, std::span<const std::size_t> local_labels) {
  return sum_neg_log(tape, pointer_distributions, local_labels, "loss_l");
}

LossBundle joint_loss(Tape& tape, const ModelParams& params, const data::EncodedSample& sample,
                      const ForwardOptions& options) {
  if (sample.sketch.size() != sample.local_label.size()) {
    throw ShapeError("joint_loss: sketch and local labels differ in length");
  }
  Rng rng(options.dropout_seed);
  auto store = knowledge::build_memory(tape, params.memory, sample.kb, sample.dialogue, Vocabulary::kNull,
                                       sample.objects);
  encoder::EncoderOptions enc_opts{options.write_hidden, options.dropout, &rng};
  auto ctx = encoder::encode(tape, sample.history, store, params.encoder, enc_opts);

  LossBundle bundle;
  bundle.weights = options.weights;
  bundle.loss_g = loss_g(ctx.global_pointer, sample.global_label);
  if (options.global_filter) store.apply_global_filter(ctx.global_pointer);

  std::vector<Var> vocab_dists;
  std::vector<Var> pointer_dists;
  Var h = initial_state(tape, params.decoder, ctx.final_state, ctx.kb_readout);
  WordId prev = Vocabulary::kSos;
  for (WordId target : sample.sketch) {
    auto step = sketch_step(tape, prev, h, params.memory, params.decoder, options.dropout, &rng);
    vocab_dists.push_back(step.vocab);
    pointer_dists.push_back(knowledge::local_pointer_query(store, step.query).distribution);
    h = step.hidden;
    prev = target;
  }
  bundle.loss_v = loss_v(tape, vocab_dists, sample.sketch);
  bundle.loss_l = loss_l(tape, pointer_dists, sample.local_label);
  const auto& w = options.weights;
  bundle.total = numerics::add(
      numerics::add(numerics::scale(bundle.loss_g, w.alpha), numerics::scale(bundle.loss_v, w.beta)),
      numerics::scale(bundle.loss_l, w.gamma));
  return bundle;
}

// ---------------------------------------------------------------------------

std::optional<std::size_t> select_copy_position(std::span<const double> pointer, std::span<const double> record) {
  if (pointer.size() != record.size()) throw ShapeError("select_copy_position: pointer/record length mismatch");
  const std::size_t copyable = pointer.empty() ? 0 : pointer.size() - 1;
  if (copyable == 0) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < copyable; ++i) {
    if (record[i] == 0.0) continue;
    if (!best || pointer[i] * record[i] > pointer[*best] * record[*best]) best = i;
  }
  if (best) return best;
  return argmax(pointer.first(copyable));
}

DecodeState decode_greedy(Tape& tape, const encoder::EncodedContext& ctx, knowledge::MemoryStore& store,
                          const ModelParams& params, const Vocabulary& vocab, std::size_t max_len) {
  DecodeState state;
  state.record.assign(store.size(), 1.0);
  state.hidden = initial_state(tape, params.decoder, ctx.final_state, ctx.kb_readout);
  WordId prev = Vocabulary::kSos;
  for (std::size_t t = 0; t < max_len; ++t) {
    auto step = sketch_step(tape, prev, state.hidden, params.memory, params.decoder);
    state.hidden = step.hidden;
    const WordId token = argmax(step.vocab.value());
    if (token == Vocabulary::kEos) break;

    DecodeStep trace;
    trace.sketch_token = token;
    trace.query = step.query;
    trace.is_tag = vocab.is_sketch_tag(token);
    trace.pointer = knowledge::local_pointer_query(store, step.query).distribution.to_vector();
    trace.record = state.record;
    if (trace.is_tag) {
      trace.copied = select_copy_position(trace.pointer, state.record);
      if (trace.copied) {
        trace.emitted = store.object_word(*trace.copied);
        state.record[*trace.copied] = 0.0;
      } else {
        trace.emitted = std::string(Vocabulary::kUnkToken);
      }
    } else {
      trace.emitted = vocab.word(token);
    }
    state.tokens.push_back(trace.emitted);
    state.sketch.push_back(token);
    state.steps.push_back(std::move(trace));
    prev = token;
  }
  return state;
}

Inference infer(const ParamStore& store_params, const ModelParams& params, const Vocabulary& vocab,
                const data::EncodedSample& sample, std::size_t max_len, const ForwardOptions& options) {
  Tape tape(store_params, /*record=*/false);
  auto store = knowledge::build_memory(tape, params.memory, sample.kb, sample.dialogue, Vocabulary::kNull,
                                       sample.objects);
  encoder::EncoderOptions enc_opts{options.write_hidden, 0.0, nullptr};
  auto ctx = encoder::encode(tape, sample.history, store, params.encoder, enc_opts);
  if (options.global_filter) store.apply_global_filter(ctx.global_pointer);
  Inference out;
  out.global_pointer = ctx.global_pointer.to_vector();
  out.state = decode_greedy(tape, ctx, store, params, vocab, max_len);
  out.tokens = out.state.tokens;
  for (WordId w : out.state.sketch) out.sketch.push_back(vocab.word(w));
  out.state.hidden = {};
  for (auto& s : out.state.steps) s.query = {};
  return out;
}

}  // namespace glmp::decoder
