// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "glmp/numerics/rng.hpp"
#include "glmp/numerics/tensor.hpp"

namespace glmp::numerics {

struct Parameter {
  std::string name;
  Tensor value;
  // Adam first and second moment accumulators, same shape as value.
  Tensor first_moment;
  Tensor second_moment;
};

/// Stable handle to a parameter inside a ParamStore.
struct ParamId {
  std::size_t index = 0;
  friend bool operator==(ParamId, ParamId) = default;
};

/// Named trainable tensors plus optimiser state.
///
/// Insertion order is preserved and is the canonical order used by
/// checkpoints and gradient reductions.
class ParamStore {
 public:
  ParamStore() = default;
  explicit ParamStore(std::uint64_t seed) : seed_(seed) {}

  // Adds a parameter drawn uniformly from [-scale, scale].
  ParamId add_uniform(const std::string& name, Shape shape, Rng& rng, double scale = 0.1);
  ParamId add(const std::string& name, Tensor value);

  ParamId id(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.contains(name); }

  const Parameter& operator[](ParamId id) const { return params_.at(id.index); }
  Parameter& operator[](ParamId id) { return params_.at(id.index); }
  const Parameter& get(const std::string& name) const { return params_.at(id(name).index); }
  Parameter& get(const std::string& name) { return params_.at(id(name).index); }

  std::size_t size() const noexcept { return params_.size(); }
  std::size_t scalar_count() const noexcept;
  const std::vector<Parameter>& parameters() const noexcept { return params_; }
  std::vector<Parameter>& parameters() noexcept { return params_; }

  std::uint64_t step() const noexcept { return step_; }
  void set_step(std::uint64_t step) noexcept { step_ = step; }
  std::uint64_t seed() const noexcept { return seed_; }
  void set_seed(std::uint64_t seed) noexcept { seed_ = seed; }

  friend bool operator==(const ParamStore& a, const ParamStore& b);

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t> index_;
  std::uint64_t step_ = 0;
  std::uint64_t seed_ = 0;
};

/// Per-parameter gradient slots, allocated on first touch.
///
/// Each worker owns one buffer; buffers are summed in a fixed order so the
/// reduced gradient does not depend on scheduling.
class GradientBuffer {
 public:
  explicit GradientBuffer(const ParamStore& store);

  // Slot for a parameter, zero-initialised with the parameter's shape.
  Tensor& slot(ParamId id);
  const Tensor* find(ParamId id) const;
  // Gradient with the parameter's shape; zeros when the parameter was never reached.
  Tensor gradient(ParamId id) const;

  void zero();
  void accumulate(const GradientBuffer& other, double scale = 1.0);
  void scale(double factor);
  double squared_norm() const;
  std::size_t size() const noexcept { return slots_.size(); }

 private:
  const ParamStore* store_;
  std::vector<Tensor> slots_;
  std::vector<bool> touched_;
};

}  // namespace glmp::numerics
