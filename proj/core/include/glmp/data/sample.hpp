// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glmp/data/vocabulary.hpp"
#include "glmp/knowledge.hpp"

namespace glmp::data {

struct TripletText {
  std::string subject;
  std::string relation;
  std::string object;
  friend bool operator==(const TripletText&, const TripletText&) = default;
};

/// One system turn with everything needed to train on it or score it.
///
/// Memory positions are 0-based: KB triplets first, then dialogue
/// triplets; position kb.size() + history.size() is the null slot.
struct DialogueSample {
  std::string dialogue_id;
  std::size_t turn = 0;            // 1-based exchange index of the system turn
  std::string domain;              // restaurant | schedule | weather | navigation
  std::vector<TripletText> kb;     // B
  std::vector<TripletText> history;  // X as ($user|$system, turnK, token)
  std::vector<std::string> gold;   // Y
  std::vector<std::string> sketch;  // Y^s, same length as Y
  std::vector<int> global_label;   // length n + l
  std::vector<std::size_t> local_label;  // length |Y|
  std::vector<std::string> entities;     // gold entity set

  std::size_t memory_size() const noexcept { return kb.size() + history.size(); }
  std::size_t null_position() const noexcept { return memory_size(); }
  // Object words of [B; X] in memory order.
  std::vector<std::string> objects() const;

  friend bool operator==(const DialogueSample&, const DialogueSample&) = default;
};

/// A DialogueSample mapped through a vocabulary, ready for the model.
struct EncodedSample {
  std::vector<knowledge::Triplet> kb;
  std::vector<knowledge::Triplet> dialogue;
  std::vector<WordId> history;       // token ids, one per dialogue position
  std::vector<std::string> objects;  // surface object words of [B; X]
  std::vector<WordId> sketch;        // Y^s ids followed by <eos>
  std::vector<std::string> gold;     // Y surface tokens
  std::vector<int> global_label;     // length n + l
  std::vector<std::size_t> local_label;  // length |Y| + 1; <eos> points at null

  std::size_t memory_size() const noexcept { return kb.size() + dialogue.size(); }
};

EncodedSample encode_sample(const DialogueSample& sample, const Vocabulary& vocab);

// Covers every token of the samples (memory, gold, sketch) seen at least
// `min_count` times; sketch tags are always kept.
Vocabulary build_vocab(const std::vector<DialogueSample>& samples, std::size_t min_count = 1);

// OOV simulation: each history token / KB object id is independently replaced
// by <unk> with probability `ratio`. Surface words, gold and labels are untouched.
EncodedSample mask_tokens(const EncodedSample& sample, double ratio, std::uint64_t seed);

}  // namespace glmp::data
