// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "glmp/data/entities.hpp"
#include "glmp/data/sample.hpp"

namespace glmp::eval {

using Tokens = std::vector<std::string>;

inline constexpr std::array<const char*, 4> kDomains = {"navigation", "restaurant", "schedule", "weather"};

// Fraction of responses whose token sequence equals the gold one.
double per_response_accuracy(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds);
// Fraction of dialogues whose responses are all exact matches.
double completion(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds,
                  const std::vector<std::string>& dialogue_ids);

struct BleuStats {
  std::array<std::size_t, 4> matches{};
  std::array<std::size_t, 4> totals{};
  std::size_t hypothesis_length = 0;
  std::size_t reference_length = 0;
  double brevity_penalty = 0.0;
  double score = 0.0;  // 0..100
};

// Corpus 4-gram BLEU, single reference, clipped counts, no smoothing: any
// zero n-gram precision gives 0.
BleuStats bleu_stats(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds);
double bleu(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds);

struct F1Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;
  // True when there is nothing to score; f1() then reports 0.
  bool undefined() const { return tp + fp + fn == 0; }
  F1Counts& operator+=(const F1Counts& o);
};

struct EntityF1 {
  F1Counts overall;
  std::map<std::string, F1Counts> per_domain;  // every known domain present
};

// Predicted entities are tokens found in `table` or in the response's
// `local_entities` (exact token membership). Responses without gold
// entities are skipped.
EntityF1 entity_f1(const std::vector<Tokens>& predictions, const std::vector<Tokens>& gold_entities,
                   const std::vector<std::string>& domains, const data::EntityTable& table,
                   const std::vector<Tokens>* local_entities = nullptr);

struct EvalReport {
  std::size_t samples = 0;
  std::size_t dialogues = 0;
  double per_response_accuracy = 0.0;
  double completion_rate = 0.0;
  double bleu = 0.0;
  EntityF1 entity;

  // Flat "key value" lines with stable key names, sorted.
  std::map<std::string, std::string> entries() const;
  std::string to_text() const;
  std::string to_json() const;
};

EvalReport evaluate(const std::vector<data::DialogueSample>& samples, const std::vector<Tokens>& predictions,
                    const data::EntityTable& table);

}  // namespace glmp::eval
