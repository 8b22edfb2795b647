// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "glmp/app/model.hpp"
#include "glmp/eval.hpp"

namespace glmp::app {

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;  // mean per sample
  double loss_g = 0.0;
  double loss_v = 0.0;
  double loss_l = 0.0;
  double dev_metric = 0.0;
  double lr = 0.0;  // rate used during this epoch
  bool improved = false;

  std::string to_json() const;
};

struct TrainResult {
  Model best;
  double best_metric = 0.0;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
  double final_lr = 0.0;
  std::string stop_reason;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Epoch loop: shuffled gradient-accumulation batches with masking and dropout,
// per-epoch dev selection, LR halving on stagnation, best-model retention.
TrainResult train(const RunConfig& config, const std::vector<data::DialogueSample>& train_samples,
                  const std::vector<data::DialogueSample>& dev_samples, const data::EntityTable& entities,
                  const EpochCallback& on_epoch = {});

struct Prediction {
  std::vector<std::string> tokens;
  std::vector<std::string> sketch;
};

std::vector<Prediction> predict(const Model& model, const std::vector<data::DialogueSample>& samples);

eval::EvalReport evaluate_model(const Model& model, const std::vector<data::DialogueSample>& samples);
double dev_metric(const RunConfig& config, const eval::EvalReport& report);

// Per decode step and memory position: triplet label, G, the last-hop
// attention of an unfiltered store, and the filtered pointer times R.
void write_attention_trace(const Model& model, const data::DialogueSample& sample, std::ostream& out);

struct AblationRow {
  std::string variant;  // full | no_h | no_g
  eval::EvalReport report;
  std::uint64_t checkpoint_hash = 0;
};

std::vector<AblationRow> run_ablation(const RunConfig& config, const std::vector<data::DialogueSample>& train_samples,
                                      const std::vector<data::DialogueSample>& dev_samples,
                                      const std::vector<data::DialogueSample>& test_samples,
                                      const data::EntityTable& entities, const std::vector<std::string>& variants);

}  // namespace glmp::app
