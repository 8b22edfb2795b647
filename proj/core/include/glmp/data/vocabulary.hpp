// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace glmp::data {

using WordId = std::size_t;

/// Token <-> id map. Ids 0..4 are reserved and never move.
/// Tokens starting with '@' are sketch tags.
class Vocabulary {
 public:
  static constexpr WordId kPad = 0;
  static constexpr WordId kUnk = 1;
  static constexpr WordId kSos = 2;
  static constexpr WordId kEos = 3;
  static constexpr WordId kNull = 4;
  static constexpr std::size_t kReservedCount = 5;

  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";
  static constexpr std::string_view kSosToken = "<sos>";
  static constexpr std::string_view kEosToken = "<eos>";
  static constexpr std::string_view kNullToken = "$$$$";

  Vocabulary();
  // Rebuilds from a token list whose first entries are the reserved tokens.
  static Vocabulary from_tokens(const std::vector<std::string>& tokens);

  WordId add(std::string_view token);
  std::optional<WordId> find(std::string_view token) const;
  // Unknown tokens map to kUnk.
  WordId id(std::string_view token) const;
  const std::string& word(WordId id) const;

  bool is_sketch_tag(WordId id) const;
  static bool is_sketch_tag(std::string_view token) { return !token.empty() && token.front() == '@'; }
  std::vector<WordId> sketch_tags() const;

  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, WordId> index_;
};

}  // namespace glmp::data
