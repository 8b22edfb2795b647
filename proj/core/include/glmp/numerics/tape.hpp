// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "glmp/numerics/params.hpp"

namespace glmp::numerics {

class Tape;

/// Handle to a node on a Tape. Vectors are rows x 1, matrices rows x cols,
/// scalars 1 x 1. Cheap to copy; only valid while its tape is alive.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::uint32_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::uint32_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

  std::span<const double> value() const;
  double scalar() const;
  double operator[](std::size_t i) const { return value()[i]; }
  std::size_t size() const;
  std::size_t rows() const;
  std::size_t cols() const;
  std::vector<double> to_vector() const;

 private:
  Tape* tape_ = nullptr;
  std::uint32_t id_ = 0;
};

/// Linear record of tensor operations for reverse-mode differentiation.
///
/// Nodes may only reference earlier nodes, so the record order is a
/// topological order and backward() is a single reverse sweep. Parameters
/// are never copied onto the tape: parameter-reading ops write their
/// gradients straight into the GradientBuffer passed to backward().
class Tape {
 public:
  using Backprop = std::function<void(Tape&, std::uint32_t self)>;

  explicit Tape(const ParamStore& params, bool record = true);
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  const ParamStore& params() const noexcept { return *params_; }
  bool recording() const noexcept { return record_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  Var constant(std::vector<double> values, std::size_t rows, std::size_t cols = 1);
  Var constant(std::vector<double> values) {
    const std::size_t n = values.size();
    return constant(std::move(values), n, 1);
  }
  Var scalar(double v) { return constant({v}, 1, 1); }

  // Adds a node. `inputs` lists the nodes it reads; each must already exist.
  Var push(std::vector<double> value, std::size_t rows, std::size_t cols,
           std::initializer_list<Var> inputs, Backprop backprop);
  Var push(std::vector<double> value, std::size_t rows, std::size_t cols,
           std::span<const Var> inputs, Backprop backprop);

  std::span<const double> value(std::uint32_t id) const { return nodes_[id].value; }
  std::size_t rows(std::uint32_t id) const { return nodes_[id].rows; }
  std::size_t cols(std::uint32_t id) const { return nodes_[id].cols; }

  // Accumulated adjoint of a node during backward(); empty if never reached.
  std::span<const double> grad(std::uint32_t id) const { return nodes_[id].grad; }
  // Mutable adjoint, zero-allocated on first access.
  std::span<double> grad_slot(std::uint32_t id);
  Tensor& param_grad(ParamId id);

  // Seeds d(loss)/d(loss) = 1 and sweeps the record in reverse.
  void backward(Var loss, GradientBuffer& grads);

 private:
  struct Node {
    std::vector<double> value;
    std::vector<double> grad;
    std::size_t rows = 0;
    std::size_t cols = 0;
    Backprop backprop;
  };

  void check_inputs(std::span<const Var> inputs) const;

  const ParamStore* params_;
  bool record_;
  std::vector<Node> nodes_;
  GradientBuffer* grads_ = nullptr;
};

// ---------------------------------------------------------------------------
// Plain (non-recorded) helpers.

std::vector<double> softmax(std::span<const double> scores);
double sigmoid(double x);
std::vector<double> sigmoid(std::span<const double> scores);

// ---------------------------------------------------------------------------
// Element-wise and reduction ops.

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var scale(Var a, double factor);
Var one_minus(Var a);
Var sigmoid(Var a);
Var tanh(Var a);
Var sum(Var a);
Var dot(Var a, Var b);
Var concat(Var a, Var b);
// Multiplies by a constant vector (used for dropout masks).
Var mul_const(Var a, std::vector<double> factors);

// ---------------------------------------------------------------------------
// Parameter-reading ops.

Var param_vector(Tape& tape, ParamId p);
Var embedding(Tape& tape, ParamId table, std::size_t row);
// Row i is the sum of table rows ids[i*bag .. i*bag+bag-1].
Var bag_of_rows(Tape& tape, ParamId table, std::span<const std::size_t> ids, std::size_t bag);
Var matvec(Tape& tape, ParamId weight, Var x);
// sum_k W_k x_k (+ bias), fused into one node.
Var linear(Tape& tape, std::initializer_list<std::pair<ParamId, Var>> terms, const ParamId* bias);

// ---------------------------------------------------------------------------
// Matrix-node ops used by memory reads.

Var stack_rows(Tape& tape, std::span<const Var> rows);
Var row(Var matrix, std::size_t index);
// Copy of `matrix` with `block` added to rows [offset, offset + block.rows()).
Var add_rows(Var matrix, Var block, std::size_t offset);
// Copy of `matrix` with row i multiplied by factors[i] for i < factors.size().
Var scale_rows(Var matrix, Var factors);
// (M[:rows] x): one logit per leading row.
Var row_dots(Var matrix, Var x, std::size_t rows);
// sum_i weights[i] * M[i] over the leading weights.size() rows.
Var weighted_row_sum(Var matrix, Var weights);

// ---------------------------------------------------------------------------
// Probability ops.

Var softmax(Var scores);
// -log(max(p[index], floor)); gradient is zero where the floor is active.
Var neg_log_at(Var probs, std::size_t index, double floor);
// -sum_i [y_i log g_i + (1 - y_i) log(1 - g_i)], log arguments floored.
Var binary_cross_entropy(Var probs, std::span<const int> labels, double floor);

}  // namespace glmp::numerics

namespace glmp::numerics {

// Inverted dropout: keeps each element with probability 1 - rate and rescales
// survivors by 1 / (1 - rate). Identity when rate == 0.
Var dropout(Var x, double rate, Rng& rng);

}  // namespace glmp::numerics
