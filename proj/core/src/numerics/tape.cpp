// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/numerics/tape.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace glmp::numerics {

std::span<const double> Var::value() const { return tape_->value(id_); }
double Var::scalar() const {
  auto v = value();
  if (v.size() != 1) throw ShapeError("expected a scalar node, got " + std::to_string(v.size()) + " values");
  return v[0];
}
std::size_t Var::size() const { return tape_->value(id_).size(); }
std::size_t Var::rows() const { return tape_->rows(id_); }
std::size_t Var::cols() const { return tape_->cols(id_); }
std::vector<double> Var::to_vector() const {
  auto v = value();
  return {v.begin(), v.end()};
}

Tape::Tape(const ParamStore& params, bool record) : params_(&params), record_(record) {
  nodes_.reserve(1024);
}

void Tape::check_inputs(std::span<const Var> inputs) const {
  for (const Var& v : inputs) {
    if (&v.tape() != this) throw InternalError("node input belongs to a different tape");
    if (v.id() >= nodes_.size()) {
      throw InternalError("node input " + std::to_string(v.id()) +
                          " does not precede its consumer; the computation record would contain a cycle");
    }
  }
}

Var Tape::constant(std::vector<double> values, std::size_t rows, std::size_t cols) {
  return push(std::move(values), rows, cols, std::span<const Var>{}, nullptr);
}

Var Tape::push(std::vector<double> value, std::size_t rows, std::size_t cols, std::initializer_list<Var> inputs,
               Backprop backprop) {
  return push(std::move(value), rows, cols, std::span<const Var>(inputs.begin(), inputs.size()), std::move(backprop));
}

Var Tape::push(std::vector<double> value, std::size_t rows, std::size_t cols, std::span<const Var> inputs,
               Backprop backprop) {
  check_inputs(inputs);
  if (value.size() != rows * cols) {
    throw ShapeError("node value count " + std::to_string(value.size()) + " != " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
  Node node;
  node.value = std::move(value);
  node.rows = rows;
  node.cols = cols;
  if (record_) node.backprop = std::move(backprop);
  nodes_.push_back(std::move(node));
  return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
}

std::span<double> Tape::grad_slot(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad.assign(n.value.size(), 0.0);
  return n.grad;
}

Tensor& Tape::param_grad(ParamId id) {
  if (grads_ == nullptr) throw InternalError("parameter gradient requested outside backward()");
  return grads_->slot(id);
}

void Tape::backward(Var loss, GradientBuffer& grads) {
  if (!record_) throw InternalError("backward() on a tape created without recording");
  if (loss.size() != 1) throw ShapeError("backward() needs a scalar loss");
  for (auto& n : nodes_) n.grad.clear();
  grads_ = &grads;
  grad_slot(loss.id())[0] = 1.0;
  for (std::uint32_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (n.grad.empty() || !n.backprop) continue;
    n.backprop(*this, id);
  }
  grads_ = nullptr;
}

// ---------------------------------------------------------------------------

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("softmax of an empty vector");
  const double mx = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> sigmoid(std::span<const double> scores) {
  std::vector<double> out(scores.size());
  std::transform(scores.begin(), scores.end(), out.begin(), [](double x) { return sigmoid(x); });
  return out;
}

namespace {

void require_same_size(Var a, Var b, const char* op) {
  if (a.size() != b.size()) {
    throw ShapeError(std::string(op) + ": size mismatch " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
}

}  // namespace

Var add(Var a, Var b) {
  require_same_size(a, b, "add");
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a, b}, [a, b](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    auto gb = t.grad_slot(b.id());
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
  });
}

Var sub(Var a, Var b) {
  require_same_size(a, b, "sub");
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a, b}, [a, b](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
    auto gb = t.grad_slot(b.id());
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
  });
}

Var mul(Var a, Var b) {
  require_same_size(a, b, "mul");
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a, b}, [a, b](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto av = t.value(a.id());
    auto bv = t.value(b.id());
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv[i];
    auto gb = t.grad_slot(b.id());
    for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av[i];
  });
}

Var scale(Var a, double factor) {
  auto av = a.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factor;
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a}, [a, factor](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * factor;
  });
}

Var mul_const(Var a, std::vector<double> factors) {
  if (factors.size() != a.size()) throw ShapeError("mul_const: factor count mismatch");
  auto av = a.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factors[i];
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a},
                       [a, f = std::move(factors)](Tape& t, std::uint32_t self) {
                         auto g = t.grad(self);
                         auto ga = t.grad_slot(a.id());
                         for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * f[i];
                       });
}

Var one_minus(Var a) {
  auto av = a.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 1.0 - av[i];
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a}, [a](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] -= g[i];
  });
}

Var sigmoid(Var a) {
  auto av = a.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(av[i]);
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a}, [a](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto y = t.value(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var tanh(Var a) {
  auto av = a.value();
  std::vector<double> out(av.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(av[i]);
  return a.tape().push(std::move(out), a.rows(), a.cols(), {a}, [a](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto y = t.value(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value()) s += v;
  return a.tape().push({s}, 1, 1, {a}, [a](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)[0];
    for (double& v : t.grad_slot(a.id())) v += g;
  });
}

Var dot(Var a, Var b) {
  require_same_size(a, b, "dot");
  auto av = a.value(), bv = b.value();
  double s = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) s += av[i] * bv[i];
  return a.tape().push({s}, 1, 1, {a, b}, [a, b](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)[0];
    auto av = t.value(a.id());
    auto bv = t.value(b.id());
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * bv[i];
    auto gb = t.grad_slot(b.id());
    for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g * av[i];
  });
}

Var concat(Var a, Var b) {
  auto av = a.value(), bv = b.value();
  std::vector<double> out(av.begin(), av.end());
  out.insert(out.end(), bv.begin(), bv.end());
  const std::size_t na = av.size();
  const std::size_t n = out.size();
  return a.tape().push(std::move(out), n, 1, {a, b}, [a, b, na](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto ga = t.grad_slot(a.id());
    for (std::size_t i = 0; i < na; ++i) ga[i] += g[i];
    auto gb = t.grad_slot(b.id());
    for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[na + i];
  });
}

// ---------------------------------------------------------------------------

Var param_vector(Tape& tape, ParamId p) {
  const Tensor& w = tape.params()[p].value;
  std::vector<double> out(w.values().begin(), w.values().end());
  const std::size_t n = out.size();
  return tape.push(std::move(out), n, 1, std::span<const Var>{}, [p](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    Tensor& gw = t.param_grad(p);
    for (std::size_t i = 0; i < g.size(); ++i) gw[i] += g[i];
  });
}

Var embedding(Tape& tape, ParamId table, std::size_t row_index) {
  const Tensor& w = tape.params()[table].value;
  if (row_index >= w.rows()) {
    throw VocabularyError("embedding row " + std::to_string(row_index) + " outside table of " +
                          std::to_string(w.rows()) + " rows");
  }
  auto r = w.row(row_index);
  std::vector<double> out(r.begin(), r.end());
  const std::size_t n = out.size();
  return tape.push(std::move(out), n, 1, std::span<const Var>{}, [table, row_index](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto gw = t.param_grad(table).row(row_index);
    for (std::size_t i = 0; i < g.size(); ++i) gw[i] += g[i];
  });
}

Var bag_of_rows(Tape& tape, ParamId table, std::span<const std::size_t> ids, std::size_t bag) {
  const Tensor& w = tape.params()[table].value;
  if (bag == 0 || ids.size() % bag != 0) throw ShapeError("bag_of_rows: id count not a multiple of bag size");
  const std::size_t n = ids.size() / bag;
  const std::size_t d = w.cols();
  for (std::size_t id : ids) {
    if (id >= w.rows()) {
      throw VocabularyError("word id " + std::to_string(id) + " outside vocabulary of " + std::to_string(w.rows()));
    }
  }
  std::vector<double> out(n * d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < bag; ++j) {
      auto r = w.row(ids[i * bag + j]);
      for (std::size_t c = 0; c < d; ++c) out[i * d + c] += r[c];
    }
  }
  std::vector<std::size_t> copy(ids.begin(), ids.end());
  return tape.push(std::move(out), n, d, std::span<const Var>{},
                   [table, ids = std::move(copy), bag, d](Tape& t, std::uint32_t self) {
                     auto g = t.grad(self);
                     Tensor& gw = t.param_grad(table);
                     for (std::size_t k = 0; k < ids.size(); ++k) {
                       const std::size_t i = k / bag;
                       auto dst = gw.row(ids[k]);
                       for (std::size_t c = 0; c < d; ++c) dst[c] += g[i * d + c];
                     }
                   });
}

Var matvec(Tape& tape, ParamId weight, Var x) { return linear(tape, {{weight, x}}, nullptr); }

Var linear(Tape& tape, std::initializer_list<std::pair<ParamId, Var>> terms, const ParamId* bias) {
  if (terms.size() == 0) throw ShapeError("linear: no terms");
  const std::size_t out_dim = tape.params()[terms.begin()->first].value.rows();
  std::vector<double> out(out_dim, 0.0);
  std::vector<Var> inputs;
  std::vector<std::pair<ParamId, Var>> kept(terms.begin(), terms.end());
  for (const auto& [w_id, x] : kept) {
    const Tensor& w = tape.params()[w_id].value;
    if (w.rows() != out_dim || w.cols() != x.size()) {
      throw ShapeError("linear: weight " + shape_string(w.shape()) + " applied to vector of " +
                       std::to_string(x.size()));
    }
    auto xv = x.value();
    const std::size_t in = w.cols();
    const double* wp = w.data();
    for (std::size_t r = 0; r < out_dim; ++r) {
      double s = 0.0;
      const double* wr = wp + r * in;
      for (std::size_t c = 0; c < in; ++c) s += wr[c] * xv[c];
      out[r] += s;
    }
    inputs.push_back(x);
  }
  std::optional<ParamId> b;
  if (bias != nullptr) {
    const Tensor& bv = tape.params()[*bias].value;
    if (bv.size() != out_dim) throw ShapeError("linear: bias size mismatch");
    for (std::size_t r = 0; r < out_dim; ++r) out[r] += bv[r];
    b = *bias;
  }
  return tape.push(std::move(out), out_dim, 1, inputs, [kept = std::move(kept), b](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    for (const auto& [w_id, x] : kept) {
      const Tensor& w = t.params()[w_id].value;
      const std::size_t in = w.cols();
      auto xv = t.value(x.id());
      Tensor& gw = t.param_grad(w_id);
      auto gx = t.grad_slot(x.id());
      const double* wp = w.data();
      double* gwp = gw.data();
      for (std::size_t r = 0; r < g.size(); ++r) {
        const double gr = g[r];
        if (gr == 0.0) continue;
        const double* wr = wp + r * in;
        double* gwr = gwp + r * in;
        for (std::size_t c = 0; c < in; ++c) {
          gwr[c] += gr * xv[c];
          gx[c] += gr * wr[c];
        }
      }
    }
    if (b) {
      Tensor& gb = t.param_grad(*b);
      for (std::size_t r = 0; r < g.size(); ++r) gb[r] += g[r];
    }
  });
}

// ---------------------------------------------------------------------------

Var stack_rows(Tape& tape, std::span<const Var> rows) {
  if (rows.empty()) throw ShapeError("stack_rows: no rows");
  const std::size_t d = rows.front().size();
  std::vector<double> out;
  out.reserve(rows.size() * d);
  for (const Var& r : rows) {
    if (r.size() != d) throw ShapeError("stack_rows: ragged rows");
    auto v = r.value();
    out.insert(out.end(), v.begin(), v.end());
  }
  std::vector<Var> kept(rows.begin(), rows.end());
  return tape.push(std::move(out), rows.size(), d, rows, [kept = std::move(kept), d](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      auto gr = t.grad_slot(kept[i].id());
      for (std::size_t c = 0; c < d; ++c) gr[c] += g[i * d + c];
    }
  });
}

Var row(Var matrix, std::size_t index) {
  if (index >= matrix.rows()) {
    throw IndexError("row " + std::to_string(index) + " outside matrix of " + std::to_string(matrix.rows()) + " rows");
  }
  const std::size_t d = matrix.cols();
  auto v = matrix.value().subspan(index * d, d);
  return matrix.tape().push(std::vector<double>(v.begin(), v.end()), d, 1, {matrix},
                            [matrix, index, d](Tape& t, std::uint32_t self) {
                              auto g = t.grad(self);
                              auto gm = t.grad_slot(matrix.id());
                              for (std::size_t c = 0; c < d; ++c) gm[index * d + c] += g[c];
                            });
}

Var add_rows(Var matrix, Var block, std::size_t offset) {
  const std::size_t d = matrix.cols();
  const std::size_t n = block.size() / std::max<std::size_t>(d, 1);
  if (block.size() != n * d || offset + n > matrix.rows()) throw ShapeError("add_rows: block does not fit");
  auto mv = matrix.value();
  std::vector<double> out(mv.begin(), mv.end());
  auto bv = block.value();
  for (std::size_t k = 0; k < bv.size(); ++k) out[offset * d + k] += bv[k];
  return matrix.tape().push(std::move(out), matrix.rows(), d, {matrix, block},
                            [matrix, block, offset, d](Tape& t, std::uint32_t self) {
                              auto g = t.grad(self);
                              auto gm = t.grad_slot(matrix.id());
                              for (std::size_t k = 0; k < g.size(); ++k) gm[k] += g[k];
                              auto gb = t.grad_slot(block.id());
                              for (std::size_t k = 0; k < gb.size(); ++k) gb[k] += g[offset * d + k];
                            });
}

Var scale_rows(Var matrix, Var factors) {
  const std::size_t d = matrix.cols();
  const std::size_t n = factors.size();
  if (n > matrix.rows()) throw ShapeError("scale_rows: more factors than rows");
  auto mv = matrix.value();
  auto fv = factors.value();
  std::vector<double> out(mv.begin(), mv.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) out[i * d + c] *= fv[i];
  }
  return matrix.tape().push(std::move(out), matrix.rows(), d, {matrix, factors},
                            [matrix, factors, n, d](Tape& t, std::uint32_t self) {
                              auto g = t.grad(self);
                              auto mv = t.value(matrix.id());
                              auto fv = t.value(factors.id());
                              auto gm = t.grad_slot(matrix.id());
                              for (std::size_t k = 0; k < g.size(); ++k) {
                                const std::size_t i = k / d;
                                gm[k] += i < n ? g[k] * fv[i] : g[k];
                              }
                              auto gf = t.grad_slot(factors.id());
                              for (std::size_t i = 0; i < n; ++i) {
                                double s = 0.0;
                                for (std::size_t c = 0; c < d; ++c) s += g[i * d + c] * mv[i * d + c];
                                gf[i] += s;
                              }
                            });
}

Var row_dots(Var matrix, Var x, std::size_t rows) {
  const std::size_t d = matrix.cols();
  if (x.size() != d) {
    throw ShapeError("row_dots: query of " + std::to_string(x.size()) + " against rows of " + std::to_string(d));
  }
  if (rows > matrix.rows()) throw ShapeError("row_dots: too many rows requested");
  auto mv = matrix.value();
  auto xv = x.value();
  std::vector<double> out(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < d; ++c) s += mv[i * d + c] * xv[c];
    out[i] = s;
  }
  return matrix.tape().push(std::move(out), rows, 1, {matrix, x}, [matrix, x, d](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto mv = t.value(matrix.id());
    auto xv = t.value(x.id());
    auto gm = t.grad_slot(matrix.id());
    auto gx = t.grad_slot(x.id());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double gi = g[i];
      for (std::size_t c = 0; c < d; ++c) {
        gm[i * d + c] += gi * xv[c];
        gx[c] += gi * mv[i * d + c];
      }
    }
  });
}

Var weighted_row_sum(Var matrix, Var weights) {
  const std::size_t d = matrix.cols();
  const std::size_t n = weights.size();
  if (n > matrix.rows()) throw ShapeError("weighted_row_sum: more weights than rows");
  auto mv = matrix.value();
  auto wv = weights.value();
  std::vector<double> out(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) out[c] += wv[i] * mv[i * d + c];
  }
  return matrix.tape().push(std::move(out), d, 1, {matrix, weights},
                            [matrix, weights, n, d](Tape& t, std::uint32_t self) {
                              auto g = t.grad(self);
                              auto mv = t.value(matrix.id());
                              auto wv = t.value(weights.id());
                              auto gm = t.grad_slot(matrix.id());
                              auto gw = t.grad_slot(weights.id());
                              for (std::size_t i = 0; i < n; ++i) {
                                double s = 0.0;
                                for (std::size_t c = 0; c < d; ++c) {
                                  gm[i * d + c] += wv[i] * g[c];
                                  s += g[c] * mv[i * d + c];
                                }
                                gw[i] += s;
                              }
                            });
}

// ---------------------------------------------------------------------------

Var softmax(Var scores) {
  auto out = softmax(scores.value());
  const std::size_t n = out.size();
  return scores.tape().push(std::move(out), n, 1, {scores}, [scores](Tape& t, std::uint32_t self) {
    auto g = t.grad(self);
    auto p = t.value(self);
    double inner = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) inner += g[i] * p[i];
    auto gs = t.grad_slot(scores.id());
    for (std::size_t i = 0; i < g.size(); ++i) gs[i] += p[i] * (g[i] - inner);
  });
}

Var neg_log_at(Var probs, std::size_t index, double floor) {
  if (index >= probs.size()) {
    throw IndexError("neg_log_at: index " + std::to_string(index) + " outside " + std::to_string(probs.size()));
  }
  const double p = probs.value()[index];
  const double v = -std::log(std::max(p, floor));
  return probs.tape().push({v}, 1, 1, {probs}, [probs, index, floor](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)[0];
    const double p = t.value(probs.id())[index];
    if (p > floor) t.grad_slot(probs.id())[index] -= g / p;
  });
}

Var binary_cross_entropy(Var probs, std::span<const int> labels, double floor) {
  if (labels.size() != probs.size()) {
    throw ShapeError("binary_cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(probs.size()) + " probabilities");
  }
  auto pv = probs.value();
  double loss = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw std::invalid_argument("binary_cross_entropy: label not in {0,1}");
    loss -= labels[i] == 1 ? std::log(std::max(pv[i], floor)) : std::log(std::max(1.0 - pv[i], floor));
  }
  std::vector<int> kept(labels.begin(), labels.end());
  return probs.tape().push({loss}, 1, 1, {probs}, [probs, kept = std::move(kept), floor](Tape& t, std::uint32_t self) {
    const double g = t.grad(self)[0];
    auto pv = t.value(probs.id());
    auto gp = t.grad_slot(probs.id());
    for (std::size_t i = 0; i < pv.size(); ++i) {
      if (kept[i] == 1) {
        if (pv[i] > floor) gp[i] -= g / pv[i];
      } else if (1.0 - pv[i] > floor) {
        gp[i] += g / (1.0 - pv[i]);
      }
    }
  });
}

}  // namespace glmp::numerics

namespace glmp::numerics {

Var dropout(Var x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  if (rate >= 1.0) throw std::invalid_argument("dropout rate must be < 1");
  std::vector<double> mask(x.size());
  const double keep = 1.0 - rate;
  for (double& m : mask) m = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
  return mul_const(x, std::move(mask));
}

}  // namespace glmp::numerics
