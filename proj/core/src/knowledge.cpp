// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/knowledge.hpp"

#include <stdexcept>

namespace glmp::knowledge {

using numerics::ParamStore;
using numerics::Rng;

HopEmbeddings HopEmbeddings::create(ParamStore& store, std::size_t hops, std::size_t vocab_size, std::size_t dim,
                                    bool tie, Rng& rng, double init_scale) {
  if (hops == 0) throw std::invalid_argument("memory needs at least one hop");
  HopEmbeddings e;
  if (tie) {
    const ParamId shared = store.add_uniform("memory.C", {vocab_size, dim}, rng, init_scale);
    e.tables.assign(hops + 1, shared);
  } else {
    for (std::size_t k = 1; k <= hops + 1; ++k) {
      e.tables.push_back(store.add_uniform("memory.C" + std::to_string(k), {vocab_size, dim}, rng, init_scale));
    }
  }
  return e;
}

HopEmbeddings HopEmbeddings::lookup(const ParamStore& store, std::size_t hops, bool tie) {
  HopEmbeddings e;
  for (std::size_t k = 1; k <= hops + 1; ++k) {
    e.tables.push_back(store.id(tie ? std::string("memory.C") : "memory.C" + std::to_string(k)));
  }
  return e;
}

MemoryStore::MemoryStore(Tape& tape, HopEmbeddings embeddings, std::vector<Triplet> kb,
                         std::vector<Triplet> dialogue, WordId null_word, std::vector<std::string> object_words)
    : tape_(&tape),
      embeddings_(std::move(embeddings)),
      kb_(std::move(kb)),
      dialogue_(std::move(dialogue)),
      null_word_(null_word),
      object_words_(std::move(object_words)) {
  if (embeddings_.tables.size() < 2) throw std::invalid_argument("memory needs K >= 1 (K+1 embedding tables)");
  const auto& first = tape.params()[embeddings_.table(1)].value;
  dim_ = first.cols();
  const std::size_t vocab = first.rows();
  auto check = [&](const Triplet& t) {
    for (WordId w : {t.subject, t.relation, t.object}) {
      if (w >= vocab) {
        throw VocabularyError("word id " + std::to_string(w) + " outside vocabulary of " + std::to_string(vocab));
      }
    }
  };
  for (const auto& t : kb_) check(t);
  for (const auto& t : dialogue_) check(t);
  if (null_word_ >= vocab) throw VocabularyError("null word id outside vocabulary");
  if (!object_words_.empty() && object_words_.size() != copyable_size()) {
    throw ShapeError("object surface count " + std::to_string(object_words_.size()) + " != memory size " +
                     std::to_string(copyable_size()));
  }
  if (object_words_.empty()) {
    object_words_.reserve(copyable_size());
    for (std::size_t i = 0; i < copyable_size(); ++i) object_words_.push_back(std::to_string(object_of(i)));
  }
  base_.assign(embeddings_.tables.size(), std::nullopt);
  cache_.assign(embeddings_.tables.size(), std::nullopt);
}

Triplet MemoryStore::triplet(std::size_t position) const {
  if (position < kb_.size()) return kb_[position];
  if (position < copyable_size()) return dialogue_[position - kb_.size()];
  if (position == null_position()) return Triplet{null_word_, null_word_, null_word_};
  throw IndexError("memory position " + std::to_string(position) + " outside store of " + std::to_string(size()));
}

WordId MemoryStore::object_of(std::size_t position) const {
  if (position == null_position()) throw NullCopyError("the null memory slot has no object word");
  return triplet(position).object;
}

const std::string& MemoryStore::object_word(std::size_t position) const {
  if (position == null_position()) throw NullCopyError("the null memory slot has no object word");
  if (position >= copyable_size()) {
    throw IndexError("memory position " + std::to_string(position) + " outside store of " + std::to_string(size()));
  }
  return object_words_[position];
}

Var MemoryStore::hop_matrix(std::size_t k) {
  if (k == 0 || k > embeddings_.tables.size()) {
    throw IndexError("hop " + std::to_string(k) + " outside [1, " + std::to_string(embeddings_.tables.size()) + "]");
  }
  auto& cached = cache_[k - 1];
  if (cached) return *cached;
  auto& base = base_[k - 1];
  if (!base) {
    std::vector<std::size_t> ids;
    ids.reserve(size() * 3);
    for (std::size_t i = 0; i < size(); ++i) {
      const Triplet t = triplet(i);
      ids.insert(ids.end(), {t.subject, t.relation, t.object});
    }
    base = numerics::bag_of_rows(*tape_, embeddings_.table(k), ids, 3);
  }
  Var m = *base;
  if (corrections_) m = numerics::add_rows(m, *corrections_, kb_.size());
  if (scales_) m = numerics::scale_rows(m, *scales_);
  cached = m;
  return m;
}

Var MemoryStore::bow_embed(std::size_t position, std::size_t k) {
  if (position >= size()) {
    throw IndexError("memory position " + std::to_string(position) + " outside store of " + std::to_string(size()));
  }
  return numerics::row(hop_matrix(k), position);
}

void MemoryStore::write_hidden(Var hidden) {
  if (hidden.size() != dialogue_.size() * dim_) {
    throw ShapeError("write_hidden: expected " + std::to_string(dialogue_.size()) + " hidden states of size " +
                     std::to_string(dim_) + ", got " + std::to_string(hidden.size()) + " values");
  }
  if (dialogue_.empty()) return;
  corrections_ = hidden;
  cache_.assign(cache_.size(), std::nullopt);
}

void MemoryStore::apply_global_filter(Var g) {
  if (g.size() != copyable_size()) {
    throw ShapeError("apply_global_filter: pointer of length " + std::to_string(g.size()) + " for " +
                     std::to_string(copyable_size()) + " memory positions");
  }
  if (scales_) throw std::logic_error("global filter already applied to this memory");
  scales_ = g;
  cache_.assign(cache_.size(), std::nullopt);
}

MemoryStore build_memory(Tape& tape, const HopEmbeddings& embeddings, std::vector<Triplet> kb,
                         std::vector<Triplet> dialogue, WordId null_word, std::vector<std::string> object_words) {
  return MemoryStore(tape, embeddings, std::move(kb), std::move(dialogue), null_word, std::move(object_words));
}

HopTrace multi_hop_read(MemoryStore& store, Var q1, bool attend_null) {
  if (q1.size() != store.dim()) {
    throw ShapeError("multi_hop_read: query of size " + std::to_string(q1.size()) + " for memory dim " +
                     std::to_string(store.dim()));
  }
  const std::size_t attended = attend_null ? store.size() : store.copyable_size();
  if (attended == 0) throw ShapeError("multi_hop_read: no attended memory positions");
  HopTrace trace;
  trace.queries.push_back(q1);
  Var q = q1;
  for (std::size_t k = 1; k <= store.hops(); ++k) {
    Var logits = numerics::row_dots(store.hop_matrix(k), q, attended);
    Var p = numerics::softmax(logits);
    Var o = numerics::weighted_row_sum(store.hop_matrix(k + 1), p);
    q = numerics::add(q, o);
    trace.attention.push_back(p);
    trace.readouts.push_back(o);
    trace.queries.push_back(q);
  }
  return trace;
}

GlobalRead global_pointer(MemoryStore& store, Var query) {
  if (store.filtered()) throw std::logic_error("global_pointer: memory already carries a global filter");
  GlobalRead out;
  out.trace = multi_hop_read(store, query, /*attend_null=*/false);
  const std::size_t k = store.hops();
  Var q_last = out.trace.queries[k - 1];
  out.pointer = numerics::sigmoid(numerics::row_dots(store.hop_matrix(k), q_last, store.copyable_size()));
  out.readout = out.trace.queries.back();
  return out;
}

LocalPointerStep local_pointer_query(MemoryStore& store, Var hidden) {
  LocalPointerStep step;
  step.trace = multi_hop_read(store, hidden, /*attend_null=*/true);
  step.distribution = step.trace.attention.back();
  return step;
}

}  // namespace glmp::knowledge
