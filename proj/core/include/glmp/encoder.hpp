// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "glmp/knowledge.hpp"
#include "glmp/numerics/gru.hpp"

namespace glmp::encoder {

using knowledge::WordId;
using numerics::Var;

/// Forward and backward context GRUs, both d -> d.
struct EncoderParams {
  numerics::GruParams forward;
  numerics::GruParams backward;

  static EncoderParams create(numerics::ParamStore& store, std::size_t dim, numerics::Rng& rng,
                              double init_scale = 0.1);
  static EncoderParams lookup(const numerics::ParamStore& store);
};

struct EncoderOptions {
  bool write_hidden = true;  // false reproduces the "without H" ablation
  double dropout = 0.0;
  numerics::Rng* rng = nullptr;  // required when dropout > 0
};

struct EncodedContext {
  std::vector<Var> states;  // merged h^e_1..h^e_n
  Var hidden;               // n x d matrix of the same states
  Var final_state;          // h^e_n
  Var kb_readout;           // q^{K+1}
  Var global_pointer;       // G over the n+l copyable positions
  knowledge::HopTrace trace;
};

// Runs the bi-GRU over C^1 embeddings of `history` (direction states merged by
// element-wise sum), writes the states into the dialogue memory, and reads the
// memory with h^e_n to obtain the global pointer and the KB readout.
EncodedContext encode(numerics::Tape& tape, std::span<const WordId> history, knowledge::MemoryStore& store,
                      const EncoderParams& params, const EncoderOptions& options = {});

}  // namespace glmp::encoder
