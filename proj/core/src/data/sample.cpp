// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/sample.hpp"

#include <map>
#include <stdexcept>

#include "glmp/numerics/rng.hpp"

namespace glmp::data {

std::vector<std::string> DialogueSample::objects() const {
  std::vector<std::string> out;
  out.reserve(memory_size());
  for (const auto& t : kb) out.push_back(t.object);
  for (const auto& t : history) out.push_back(t.object);
  return out;
}

EncodedSample encode_sample(const DialogueSample& sample, const Vocabulary& vocab) {
  if (sample.sketch.size() != sample.gold.size() || sample.local_label.size() != sample.gold.size()) {
    throw ShapeError("sample " + sample.dialogue_id + ": gold, sketch and local labels differ in length");
  }
  if (sample.global_label.size() != sample.memory_size()) {
    throw ShapeError("sample " + sample.dialogue_id + ": global label length does not match memory");
  }
  EncodedSample out;
  auto triplet = [&](const TripletText& t) {
    return knowledge::Triplet{vocab.id(t.subject), vocab.id(t.relation), vocab.id(t.object)};
  };
  for (const auto& t : sample.kb) out.kb.push_back(triplet(t));
  for (const auto& t : sample.history) {
    out.dialogue.push_back(triplet(t));
    out.history.push_back(out.dialogue.back().object);
  }
  out.objects = sample.objects();
  for (const auto& tok : sample.sketch) out.sketch.push_back(vocab.id(tok));
  out.sketch.push_back(Vocabulary::kEos);
  out.gold = sample.gold;
  out.global_label = sample.global_label;
  out.local_label = sample.local_label;
  out.local_label.push_back(sample.null_position());
  return out;
}

Vocabulary build_vocab(const std::vector<DialogueSample>& samples, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  auto see = [&](const std::string& tok) {
    auto [it, inserted] = counts.try_emplace(tok, 0);
    if (inserted) order.push_back(tok);
    ++it->second;
  };
  for (const auto& s : samples) {
    for (const auto& t : s.kb) {
      see(t.subject);
      see(t.relation);
      see(t.object);
    }
    for (const auto& t : s.history) {
      see(t.subject);
      see(t.relation);
      see(t.object);
    }
    for (const auto& t : s.gold) see(t);
    for (const auto& t : s.sketch) see(t);
  }
  Vocabulary vocab;
  for (const auto& tok : order) {
    if (Vocabulary::is_sketch_tag(tok) || counts[tok] >= min_count) vocab.add(tok);
  }
  return vocab;
}

EncodedSample mask_tokens(const EncodedSample& sample, double ratio, std::uint64_t seed) {
  if (ratio < 0.0 || ratio >= 1.0) throw std::invalid_argument("mask ratio must lie in [0, 1)");
  EncodedSample out = sample;
  if (ratio == 0.0) return out;
  numerics::Rng rng(seed);
  for (auto& t : out.kb) {
    if (rng.bernoulli(ratio)) t.object = Vocabulary::kUnk;
  }
  for (std::size_t i = 0; i < out.dialogue.size(); ++i) {
    if (rng.bernoulli(ratio)) {
      out.dialogue[i].object = Vocabulary::kUnk;
      out.history[i] = Vocabulary::kUnk;
    }
  }
  return out;
}

}  // namespace glmp::data
