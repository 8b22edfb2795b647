// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glmp/app/config.hpp"
#include "glmp/data/entities.hpp"
#include "glmp/data/vocabulary.hpp"
#include "glmp/decoder.hpp"
#include "glmp/numerics/params.hpp"

namespace glmp::app {

inline constexpr std::string_view kModelFormat = "glmp-model";

/// Trained (or freshly initialised) model plus what is needed to use it.
struct Model {
  RunConfig config;
  data::Vocabulary vocab;
  data::EntityTable entities;
  decoder::ModelConfig shape;
  numerics::ParamStore params;
  decoder::ModelParams handles;

  static Model create(const RunConfig& config, data::Vocabulary vocab, data::EntityTable entities);

  decoder::ForwardOptions forward_options() const;
  std::string metadata() const;
  std::vector<std::uint8_t> encode() const;
  std::uint64_t hash() const;
  void save(const std::filesystem::path& path) const;
  static Model decode(const std::vector<std::uint8_t>& bytes);
  static Model load(const std::filesystem::path& path);
};

// Throws VersionError when the checkpoint's architecture does not match `config`.
void check_compatible(const Model& model, const RunConfig& config);

// ---------------------------------------------------------------------------

enum class Split { kTrain, kDev, kTest, kTestOov };
Split parse_split(std::string_view name);
std::string split_name(Split split);

std::filesystem::path split_path(const RunConfig& config, Split split);
data::EntityTable load_entities(const RunConfig& config);
// Parses the split (bAbI text, SMD JSON, or cached .jsonl samples).
std::vector<data::DialogueSample> load_split(const RunConfig& config, Split split, const data::EntityTable& entities);
// Keeps the samples of the first `max_dialogues` dialogues (0 keeps all).
std::vector<data::DialogueSample> take_dialogues(std::vector<data::DialogueSample> samples, std::size_t max_dialogues);

}  // namespace glmp::app
