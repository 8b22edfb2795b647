// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/vocabulary.hpp"

#include "glmp/errors.hpp"

namespace glmp::data {

Vocabulary::Vocabulary() {
  for (auto t : {kPadToken, kUnkToken, kSosToken, kEosToken, kNullToken}) add(t);
}

Vocabulary Vocabulary::from_tokens(const std::vector<std::string>& tokens) {
  Vocabulary v;
  if (tokens.size() < kReservedCount) throw VersionError("vocabulary is missing reserved tokens");
  for (std::size_t i = 0; i < kReservedCount; ++i) {
    if (tokens[i] != v.tokens_[i]) throw VersionError("vocabulary reserved token mismatch at id " + std::to_string(i));
  }
  for (std::size_t i = kReservedCount; i < tokens.size(); ++i) {
    if (v.find(tokens[i])) throw VersionError("duplicate vocabulary token '" + tokens[i] + "'");
    v.add(tokens[i]);
  }
  return v;
}

WordId Vocabulary::add(std::string_view token) {
  if (auto existing = find(token)) return *existing;
  const WordId id = tokens_.size();
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

std::optional<WordId> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

WordId Vocabulary::id(std::string_view token) const { return find(token).value_or(kUnk); }

const std::string& Vocabulary::word(WordId id) const {
  if (id >= tokens_.size()) {
    throw VocabularyError("word id " + std::to_string(id) + " outside vocabulary of " + std::to_string(size()));
  }
  return tokens_[id];
}

bool Vocabulary::is_sketch_tag(WordId id) const { return is_sketch_tag(word(id)); }

std::vector<WordId> Vocabulary::sketch_tags() const {
  std::vector<WordId> out;
  for (WordId i = 0; i < tokens_.size(); ++i) {
    if (is_sketch_tag(tokens_[i])) out.push_back(i);
  }
  return out;
}

}  // namespace glmp::data
