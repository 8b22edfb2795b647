// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/numerics/gru.hpp"

namespace glmp::numerics {

GruParams GruParams::create(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                            std::size_t hidden_dim, Rng& rng, double init_scale) {
  GruParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  auto w = [&](const char* name, std::size_t cols) {
    return store.add_uniform(prefix + "." + name, {hidden_dim, cols}, rng, init_scale);
  };
  auto b = [&](const char* name) { return store.add_uniform(prefix + "." + name, {hidden_dim}, rng, init_scale); };
  p.w_update = w("W_z", input_dim);
  p.u_update = w("U_z", hidden_dim);
  p.b_update = b("b_z");
  p.w_reset = w("W_r", input_dim);
  p.u_reset = w("U_r", hidden_dim);
  p.b_reset = b("b_r");
  p.w_cand = w("W_h", input_dim);
  p.u_cand = w("U_h", hidden_dim);
  p.b_cand = b("b_h");
  return p;
}

GruParams GruParams::lookup(const ParamStore& store, const std::string& prefix) {
  GruParams p;
  p.w_update = store.id(prefix + ".W_z");
  p.u_update = store.id(prefix + ".U_z");
  p.b_update = store.id(prefix + ".b_z");
  p.w_reset = store.id(prefix + ".W_r");
  p.u_reset = store.id(prefix + ".U_r");
  p.b_reset = store.id(prefix + ".b_r");
  p.w_cand = store.id(prefix + ".W_h");
  p.u_cand = store.id(prefix + ".U_h");
  p.b_cand = store.id(prefix + ".b_h");
  const Tensor& w = store[p.w_update].value;
  p.hidden_dim = w.rows();
  p.input_dim = w.cols();
  return p;
}

Var gru_cell(Tape& tape, const GruParams& p, Var x, Var h_prev) {
  if (x.size() != p.input_dim || h_prev.size() != p.hidden_dim) {
    throw ShapeError("gru_cell: expected input " + std::to_string(p.input_dim) + " and state " +
                     std::to_string(p.hidden_dim) + ", got " + std::to_string(x.size()) + " and " +
                     std::to_string(h_prev.size()));
  }
  Var z = sigmoid(linear(tape, {{p.w_update, x}, {p.u_update, h_prev}}, &p.b_update));
  Var r = sigmoid(linear(tape, {{p.w_reset, x}, {p.u_reset, h_prev}}, &p.b_reset));
  Var c = tanh(linear(tape, {{p.w_cand, x}, {p.u_cand, mul(r, h_prev)}}, &p.b_cand));
  return add(mul(one_minus(z), h_prev), mul(z, c));
}

}  // namespace glmp::numerics
