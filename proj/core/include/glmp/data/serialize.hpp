// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glmp/data/sample.hpp"
#include "glmp/data/vocabulary.hpp"

namespace glmp::data {

inline constexpr int kSampleFormatVersion = 1;
inline constexpr std::string_view kSampleFormatName = "glmp-sample";

// One JSON object per line, one line per system turn.
std::string sample_to_json(const DialogueSample& sample);
DialogueSample sample_from_json(std::string_view line);

void write_samples(const std::filesystem::path& path, const std::vector<DialogueSample>& samples);
std::vector<DialogueSample> read_samples(const std::filesystem::path& path);

// Vocabulary as a JSON array of tokens in id order.
std::string vocab_to_json(const Vocabulary& vocab);
Vocabulary vocab_from_json(std::string_view text);

}  // namespace glmp::data
