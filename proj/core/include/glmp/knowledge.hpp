// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "glmp/numerics/tape.hpp"

namespace glmp::knowledge {

using numerics::ParamId;
using numerics::Tape;
using numerics::Var;
using WordId = std::size_t;

/// One memory element. Only the object word is ever copied into a response.
struct Triplet {
  WordId subject = 0;
  WordId relation = 0;
  WordId object = 0;
  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// The K+1 embedding tables C^1..C^{K+1}, each |V| x d.
struct HopEmbeddings {
  std::vector<ParamId> tables;

  // With `tie` every hop shares one table (layer-wise tying); otherwise K+1 independent tables.
  static HopEmbeddings create(numerics::ParamStore& store, std::size_t hops, std::size_t vocab_size,
                              std::size_t dim, bool tie, numerics::Rng& rng, double init_scale = 0.1);
  static HopEmbeddings lookup(const numerics::ParamStore& store, std::size_t hops, bool tie);

  std::size_t hops() const noexcept { return tables.size() - 1; }
  // 1-based hop index k in [1, K+1].
  ParamId table(std::size_t k) const { return tables.at(k - 1); }
};

/// Shared external knowledge M = [B; X; null] for one dialogue turn.
///
/// Positions 0..l-1 hold KB triplets, l..l+n-1 dialogue triplets, and
/// position l+n is the trainable null slot. The per-hop memory matrices are
/// built lazily on the owning tape and rebuilt after every write or filter.
class MemoryStore {
 public:
  MemoryStore(Tape& tape, HopEmbeddings embeddings, std::vector<Triplet> kb, std::vector<Triplet> dialogue,
              WordId null_word, std::vector<std::string> object_words = {});

  Tape& tape() const noexcept { return *tape_; }
  const HopEmbeddings& embeddings() const noexcept { return embeddings_; }
  std::size_t hops() const noexcept { return embeddings_.hops(); }
  std::size_t dim() const noexcept { return dim_; }

  std::size_t kb_size() const noexcept { return kb_.size(); }
  std::size_t dialogue_size() const noexcept { return dialogue_.size(); }
  // n + l copyable positions.
  std::size_t copyable_size() const noexcept { return kb_.size() + dialogue_.size(); }
  // n + l + 1 including the null slot.
  std::size_t size() const noexcept { return copyable_size() + 1; }
  std::size_t null_position() const noexcept { return copyable_size(); }
  bool is_dialogue(std::size_t position) const noexcept {
    return position >= kb_.size() && position < copyable_size();
  }

  Triplet triplet(std::size_t position) const;
  WordId object_of(std::size_t position) const;
  // Surface form used when copying; falls back to the object id rendered as text.
  const std::string& object_word(std::size_t position) const;
  const std::vector<std::string>& object_words() const noexcept { return object_words_; }

  // (n+l+1) x d memory matrix for hop k in [1, K+1], with hidden-state
  // corrections and global scaling applied.
  Var hop_matrix(std::size_t k);
  Var bow_embed(std::size_t position, std::size_t k);

  // Adds hidden[i] to dialogue position i at every hop. hidden is n x d.
  void write_hidden(Var hidden);
  // Scales positions 0..n+l-1 at every hop by g. The null slot keeps factor 1.
  void apply_global_filter(Var g);

  bool has_hidden() const noexcept { return corrections_.has_value(); }
  bool filtered() const noexcept { return scales_.has_value(); }
  std::optional<Var> corrections() const noexcept { return corrections_; }
  std::optional<Var> scales() const noexcept { return scales_; }

 private:
  Tape* tape_;
  HopEmbeddings embeddings_;
  std::vector<Triplet> kb_;
  std::vector<Triplet> dialogue_;
  WordId null_word_;
  std::vector<std::string> object_words_;
  std::size_t dim_;
  std::optional<Var> corrections_;
  std::optional<Var> scales_;
  std::vector<std::optional<Var>> base_;
  std::vector<std::optional<Var>> cache_;
};

MemoryStore build_memory(Tape& tape, const HopEmbeddings& embeddings, std::vector<Triplet> kb,
                         std::vector<Triplet> dialogue, WordId null_word,
                         std::vector<std::string> object_words = {});

/// Attention distributions, readouts and queries of one K-hop read.
struct HopTrace {
  std::vector<Var> attention;  // p^1..p^K
  std::vector<Var> readouts;   // o^1..o^K
  std::vector<Var> queries;    // q^1..q^{K+1}
};

// K-hop read starting from q1. The null slot is attended only when `attend_null`.
HopTrace multi_hop_read(MemoryStore& store, Var q1, bool attend_null);

struct GlobalRead {
  Var pointer;  // G, length n+l, each entry an independent probability
  Var readout;  // q^{K+1}, the encoded KB information
  HopTrace trace;
};

// G_i = sigmoid(q^K . c^K_i) over the copyable positions. Requires an unfiltered store.
GlobalRead global_pointer(MemoryStore& store, Var query);

struct LocalPointerStep {
  Var distribution;  // L_t over n+l+1 positions (last one is null)
  HopTrace trace;
};

// Last-hop attention of a null-inclusive read queried with the sketch state.
LocalPointerStep local_pointer_query(MemoryStore& store, Var hidden);

}  // namespace glmp::knowledge
