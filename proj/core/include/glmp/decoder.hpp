// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "glmp/data/sample.hpp"
#include "glmp/data/vocabulary.hpp"
#include "glmp/encoder.hpp"
#include "glmp/knowledge.hpp"

namespace glmp::decoder {

using knowledge::WordId;
using numerics::Tape;
using numerics::Var;

inline constexpr double kProbabilityFloor = 1e-12;

struct DecoderParams {
  numerics::ParamId init_weight;  // d x 2d projection of [h^e_n ; q^{K+1}]
  numerics::ParamId init_bias;
  numerics::GruParams sketch_rnn;
  numerics::ParamId output;  // |V| x d, P^vocab = softmax(W h^d)

  static DecoderParams create(numerics::ParamStore& store, std::size_t vocab_size, std::size_t dim,
                              numerics::Rng& rng, double init_scale = 0.1);
  static DecoderParams lookup(const numerics::ParamStore& store);
};

struct ModelConfig {
  std::size_t vocab_size = 0;
  std::size_t dim = 64;
  std::size_t hops = 1;
  bool tie_hops = false;
  double init_scale = 0.1;
};

/// Handles to every trainable tensor of the model.
struct ModelParams {
  knowledge::HopEmbeddings memory;
  encoder::EncoderParams encoder;
  DecoderParams decoder;

  static ModelParams create(numerics::ParamStore& store, const ModelConfig& config, numerics::Rng& rng);
  static ModelParams lookup(const numerics::ParamStore& store, const ModelConfig& config);
};

struct LossWeights {
  double alpha = 1.0;  // global pointer
  double beta = 1.0;   // sketch vocabulary
  double gamma = 1.0;  // local pointer
};

struct ForwardOptions {
  bool write_hidden = true;   // false: "without H" ablation
  bool global_filter = true;  // false: "without G" ablation
  double dropout = 0.0;
  std::uint64_t dropout_seed = 0;
  LossWeights weights;
};

// ---------------------------------------------------------------------------
// Sketch RNN

struct SketchStep {
  Var hidden;  // h^d_t, carried to the next step
  Var query;   // h^d_t after output dropout; queries memory and feeds W
  Var vocab;   // P^vocab_t
};

SketchStep sketch_step(Tape& tape, WordId prev_token, Var h_prev, const knowledge::HopEmbeddings& embeddings,
                       const DecoderParams& params, double dropout = 0.0, numerics::Rng* rng = nullptr);

// h^d_0 = W [h^e_n ; q^{K+1}] + b
Var initial_state(Tape& tape, const DecoderParams& params, Var encoded_history, Var kb_readout);

// ---------------------------------------------------------------------------
// Labels

using SlotLookup = std::function<std::optional<std::string>(std::string_view token)>;

// Entity tokens become '@'-prefixed slot tags; everything else passes through.
std::vector<std::string> make_sketch_labels(std::span<const std::string> gold, const SlotLookup& slot_of);

// 1 where the position's object word occurs in `gold`.
std::vector<int> global_label_from_objects(std::span<const std::string> gold,
                                           std::span<const std::string> objects);
// Largest 0-based position whose object equals each gold token, else objects.size() (null).
std::vector<std::size_t> local_labels_from_objects(std::span<const std::string> gold,
                                                   std::span<const std::string> objects);

std::vector<int> make_global_label(std::span<const std::string> gold, const knowledge::MemoryStore& store);
std::vector<std::size_t> make_local_labels(std::span<const std::string> gold, const knowledge::MemoryStore& store);

// ---------------------------------------------------------------------------
// Losses

Var loss_g(Var global_pointer, std::span<const int> labels);
Var loss_v(Tape& tape, std::span<const Var> vocab_distributions, std::span<const WordId> sketch_labels);
Var loss_l(Tape& tape, std::span<const Var> pointer_distributions, std::span<const std::size_t> local_labels);

struct LossBundle {
  Var loss_g;
  Var loss_v;
  Var loss_l;
  Var total;
  LossWeights weights;

  double value() const { return total.scalar(); }
};

// Teacher-forced pass over one sample: encode, filter, sketch RNN over the gold
// sketch, and the weighted sum of the three losses.
LossBundle joint_loss(Tape& tape, const ModelParams& params, const data::EncodedSample& sample,
                      const ForwardOptions& options = {});

// ---------------------------------------------------------------------------
// Greedy inference

struct DecodeStep {
  WordId sketch_token = 0;
  bool is_tag = false;
  Var query;
  std::vector<double> pointer;  // L_t over n+l+1 positions
  std::vector<double> record;   // R at the time of the step (before clearing)
  std::optional<std::size_t> copied;
  std::string emitted;
};

struct DecodeState {
  Var hidden;
  std::vector<double> record;  // R, n+l+1 entries; the null entry stays 1
  std::vector<std::string> tokens;
  std::vector<WordId> sketch;
  std::vector<DecodeStep> steps;
};

// Greedy sketch generation with record-masked copies for sketch tags. The
// caller applies the global filter to `store` beforehand (unless ablated).
DecodeState decode_greedy(Tape& tape, const encoder::EncodedContext& ctx, knowledge::MemoryStore& store,
                          const ModelParams& params, const data::Vocabulary& vocab, std::size_t max_len);

// Picks the copy position for a sketch tag: argmax over copyable positions of
// L_t * R (lowest index on ties). When every copyable position is masked the
// record is ignored. Returns nullopt when the memory has no copyable position.
std::optional<std::size_t> select_copy_position(std::span<const double> pointer, std::span<const double> record);

/// Everything produced by one end-to-end greedy inference.
struct Inference {
  std::vector<std::string> tokens;
  std::vector<std::string> sketch;
  std::vector<double> global_pointer;
  DecodeState state;
};

Inference infer(const numerics::ParamStore& store, const ModelParams& params, const data::Vocabulary& vocab,
                const data::EncodedSample& sample, std::size_t max_len, const ForwardOptions& options = {});

}  // namespace glmp::decoder
