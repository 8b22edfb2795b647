// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "glmp/data/sample.hpp"

namespace glmp::data {

// Lowercased, trimmed, inner whitespace collapsed to '_'.
std::string canonical_entity(std::string_view value);
// Underscores back to spaces for display.
std::string surface(std::string_view token);

// Lowercase, whitespace split, punctuation detached from token edges.
std::vector<std::string> basic_tokens(std::string_view text);

/// Entity value -> slot type. Values are stored canonically (single tokens).
class EntityTable {
 public:
  // Keeps the first slot type registered for a value. Returns false if the value was already known.
  bool add(std::string_view value, std::string_view slot);
  void merge(const EntityTable& other);

  std::optional<std::string> slot_of(std::string_view token) const;
  bool contains(std::string_view token) const { return slots_.contains(std::string(token)); }
  std::size_t size() const noexcept { return order_.size(); }
  const std::vector<std::string>& values() const noexcept { return order_; }
  std::vector<std::string> slot_types() const;

  // Joins multi-word entity values into their canonical token, longest match first.
  std::vector<std::string> join(std::vector<std::string> tokens) const;

 private:
  std::unordered_map<std::string, std::string> slots_;
  std::vector<std::string> order_;
  // basic_tokens of a multi-word value -> canonical value, keyed by first token.
  std::unordered_map<std::string, std::vector<std::pair<std::vector<std::string>, std::string>>> phrases_;
};

std::vector<std::string> tokenize(std::string_view text, const EntityTable* table = nullptr);

// Fills sketch, entities and both label vectors from gold, kb and history.
void label_sample(DialogueSample& sample, const EntityTable& table);

// Distinct dialogue ids in first-seen order.
std::vector<std::string> dialogue_ids(const std::vector<DialogueSample>& samples);

}  // namespace glmp::data
