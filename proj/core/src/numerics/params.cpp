// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/numerics/params.hpp"

namespace glmp::numerics {

ParamId ParamStore::add(const std::string& name, Tensor value) {
  if (index_.contains(name)) throw std::invalid_argument("duplicate parameter name: " + name);
  Parameter p;
  p.name = name;
  p.first_moment = Tensor(value.shape());
  p.second_moment = Tensor(value.shape());
  p.value = std::move(value);
  index_.emplace(name, params_.size());
  params_.push_back(std::move(p));
  return ParamId{params_.size() - 1};
}

ParamId ParamStore::add_uniform(const std::string& name, Shape shape, Rng& rng, double scale) {
  Tensor t(std::move(shape));
  for (double& v : t.values()) v = rng.uniform(-scale, scale);
  return add(name, std::move(t));
}

ParamId ParamStore::id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("unknown parameter: " + name);
  return ParamId{it->second};
}

std::size_t ParamStore::scalar_count() const noexcept {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

bool operator==(const ParamStore& a, const ParamStore& b) {
  if (a.step_ != b.step_ || a.seed_ != b.seed_ || a.params_.size() != b.params_.size()) return false;
  for (std::size_t i = 0; i < a.params_.size(); ++i) {
    const auto& x = a.params_[i];
    const auto& y = b.params_[i];
    if (x.name != y.name || x.value != y.value || x.first_moment != y.first_moment ||
        x.second_moment != y.second_moment) {
      return false;
    }
  }
  return true;
}

GradientBuffer::GradientBuffer(const ParamStore& store)
    : store_(&store), slots_(store.size()), touched_(store.size(), false) {}

Tensor& GradientBuffer::slot(ParamId id) {
  if (!touched_[id.index]) {
    const Shape& shape = (*store_)[id].value.shape();
    if (slots_[id.index].shape() != shape) {
      slots_[id.index] = Tensor(shape);
    } else {
      slots_[id.index].fill(0.0);
    }
    touched_[id.index] = true;
  }
  return slots_[id.index];
}

const Tensor* GradientBuffer::find(ParamId id) const {
  return touched_.at(id.index) ? &slots_[id.index] : nullptr;
}

Tensor GradientBuffer::gradient(ParamId id) const {
  if (const Tensor* t = find(id)) return *t;
  return Tensor((*store_)[id].value.shape());
}

void GradientBuffer::zero() { std::fill(touched_.begin(), touched_.end(), false); }

void GradientBuffer::accumulate(const GradientBuffer& other, double scale) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    const Tensor* src = other.find(ParamId{i});
    if (src == nullptr) continue;
    Tensor& dst = slot(ParamId{i});
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += scale * (*src)[j];
  }
}

void GradientBuffer::scale(double factor) {
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!touched_[i]) continue;
    for (double& v : slots_[i].values()) v *= factor;
  }
}

double GradientBuffer::squared_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (!touched_[i]) continue;
    for (double v : slots_[i].values()) s += v * v;
  }
  return s;
}

}  // namespace glmp::numerics
