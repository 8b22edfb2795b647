// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/encoder.hpp"

#include <stdexcept>

namespace glmp::encoder {

using numerics::GruParams;
using numerics::Tape;

EncoderParams EncoderParams::create(numerics::ParamStore& store, std::size_t dim, numerics::Rng& rng,
                                    double init_scale) {
  return {GruParams::create(store, "encoder.fwd", dim, dim, rng, init_scale),
          GruParams::create(store, "encoder.bwd", dim, dim, rng, init_scale)};
}

EncoderParams EncoderParams::lookup(const numerics::ParamStore& store) {
  return {GruParams::lookup(store, "encoder.fwd"), GruParams::lookup(store, "encoder.bwd")};
}

EncodedContext encode(Tape& tape, std::span<const WordId> history, knowledge::MemoryStore& store,
                      const EncoderParams& params, const EncoderOptions& options) {
  if (history.empty()) throw std::invalid_argument("encode: empty dialogue history");
  if (store.dialogue_size() != history.size()) {
    throw ShapeError("encode: history of " + std::to_string(history.size()) + " tokens but dialogue memory holds " +
                     std::to_string(store.dialogue_size()));
  }
  if (options.dropout > 0.0 && options.rng == nullptr) throw std::invalid_argument("encode: dropout needs an rng");
  const std::size_t n = history.size();
  const std::size_t d = store.dim();
  const auto table = store.embeddings().table(1);

  std::vector<Var> inputs;
  inputs.reserve(n);
  for (WordId w : history) {
    Var x = numerics::embedding(tape, table, w);
    if (options.dropout > 0.0) x = numerics::dropout(x, options.dropout, *options.rng);
    inputs.push_back(x);
  }

  std::vector<Var> fwd(n), bwd(n);
  Var h = tape.constant(std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < n; ++i) fwd[i] = h = numerics::gru_cell(tape, params.forward, inputs[i], h);
  h = tape.constant(std::vector<double>(d, 0.0));
  for (std::size_t i = n; i-- > 0;) bwd[i] = h = numerics::gru_cell(tape, params.backward, inputs[i], h);

  EncodedContext ctx;
  ctx.states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Var merged = numerics::add(fwd[i], bwd[i]);
    if (options.dropout > 0.0) merged = numerics::dropout(merged, options.dropout, *options.rng);
    ctx.states.push_back(merged);
  }
  ctx.hidden = numerics::stack_rows(tape, ctx.states);
  ctx.final_state = ctx.states.back();
  if (options.write_hidden) store.write_hidden(ctx.hidden);

  auto read = knowledge::global_pointer(store, ctx.final_state);
  ctx.global_pointer = read.pointer;
  ctx.kb_readout = read.readout;
  ctx.trace = std::move(read.trace);
  return ctx;
}

}  // namespace glmp::encoder
