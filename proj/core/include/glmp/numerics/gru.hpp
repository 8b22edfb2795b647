// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "glmp/numerics/tape.hpp"

namespace glmp::numerics {

/// Gate weights for one GRU cell.
///
///   z = sigmoid(Wz x + Uz h + bz)
///   r = sigmoid(Wr x + Ur h + br)
///   c = tanh(Wh x + Uh (r * h) + bh)
///   h' = (1 - z) * h + z * c
struct GruParams {
  ParamId w_update, u_update, b_update;
  ParamId w_reset, u_reset, b_reset;
  ParamId w_cand, u_cand, b_cand;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;

  // Registers `<prefix>.W_z` ... `<prefix>.b_h` in `store`.
  static GruParams create(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                          std::size_t hidden_dim, Rng& rng, double init_scale = 0.1);
  static GruParams lookup(const ParamStore& store, const std::string& prefix);
};

Var gru_cell(Tape& tape, const GruParams& params, Var x, Var h_prev);

}  // namespace glmp::numerics
