// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/entities.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "glmp/decoder.hpp"

namespace glmp::data {

namespace {

bool is_edge_punct(char c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string canonical_entity(std::string_view value) {
  std::string out;
  bool gap = false;
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = !out.empty();
      continue;
    }
    if (gap) out.push_back('_');
    gap = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

std::string surface(std::string_view token) {
  std::string out(token);
  std::replace(out.begin(), out.end(), '_', ' ');
  return out;
}

std::vector<std::string> basic_tokens(std::string_view text) {
  std::vector<std::string> out;
  const std::string low = lower(text);
  std::size_t i = 0;
  while (i < low.size()) {
    while (i < low.size() && std::isspace(static_cast<unsigned char>(low[i]))) ++i;
    std::size_t j = i;
    while (j < low.size() && !std::isspace(static_cast<unsigned char>(low[j]))) ++j;
    if (j > i) {
      std::size_t b = i, e = j;
      std::vector<std::string> tail;
      while (b < e && is_edge_punct(low[b])) out.emplace_back(1, low[b++]);
      while (e > b && is_edge_punct(low[e - 1])) tail.emplace_back(1, low[--e]);
      if (e > b) out.emplace_back(low.substr(b, e - b));
      out.insert(out.end(), tail.rbegin(), tail.rend());
    }
    i = j;
  }
  return out;
}

bool EntityTable::add(std::string_view value, std::string_view slot) {
  std::string key = canonical_entity(value);
  if (key.empty() || slots_.contains(key)) return false;
  slots_.emplace(key, std::string(slot));
  order_.push_back(key);
  auto words = basic_tokens(surface(key));
  if (words.size() > 1) phrases_[words.front()].emplace_back(std::move(words), key);
  return true;
}

void EntityTable::merge(const EntityTable& other) {
  for (const auto& v : other.order_) add(v, other.slots_.at(v));
}

std::optional<std::string> EntityTable::slot_of(std::string_view token) const {
  auto it = slots_.find(std::string(token));
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> EntityTable::slot_types() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& v : order_) {
    const auto& s = slots_.at(v);
    if (seen.insert(s).second) out.push_back(s);
  }
  return out;
}

std::vector<std::string> EntityTable::join(std::vector<std::string> tokens) const {
  if (phrases_.empty()) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::vector<std::string>* best_words = nullptr;
    const std::string* best_key = nullptr;
    if (auto it = phrases_.find(tokens[i]); it != phrases_.end()) {
      for (const auto& [words, key] : it->second) {
        if (i + words.size() > tokens.size()) continue;
        if (best_words && words.size() <= best_words->size()) continue;
        if (std::equal(words.begin(), words.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i))) {
          best_words = &words;
          best_key = &key;
        }
      }
    }
    if (best_words) {
      out.push_back(*best_key);
      i += best_words->size();
    } else {
      out.push_back(std::move(tokens[i++]));
    }
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text, const EntityTable* table) {
  auto tokens = basic_tokens(text);
  return table ? table->join(std::move(tokens)) : tokens;
}

void label_sample(DialogueSample& sample, const EntityTable& table) {
  sample.sketch = decoder::make_sketch_labels(sample.gold, [&](std::string_view tok) { return table.slot_of(tok); });
  const auto objects = sample.objects();
  sample.global_label = decoder::global_label_from_objects(sample.gold, objects);
  sample.local_label = decoder::local_labels_from_objects(sample.gold, objects);
  sample.entities.clear();
  for (const auto& tok : sample.gold) {
    if (table.contains(tok) && std::find(sample.entities.begin(), sample.entities.end(), tok) == sample.entities.end()) {
      sample.entities.push_back(tok);
    }
  }
}

std::vector<std::string> dialogue_ids(const std::vector<DialogueSample>& samples) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& s : samples) {
    if (seen.insert(s.dialogue_id).second) out.push_back(s.dialogue_id);
  }
  return out;
}

}  // namespace glmp::data
