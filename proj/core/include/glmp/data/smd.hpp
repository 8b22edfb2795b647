// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "glmp/data/entities.hpp"
#include "glmp/data/sample.hpp"

namespace glmp::data {

struct SmdOptions {
  // Adds (subject, <first column>, subject) per row so the row key itself is copyable.
  bool subject_triplets = true;
};

// Global entity listing in the kvret_entities.json layout.
EntityTable load_smd_entities(const std::filesystem::path& path);
EntityTable parse_smd_entities(std::string_view json_text);

std::vector<DialogueSample> parse_smd(const std::filesystem::path& path, const EntityTable& entities = {},
                                      const SmdOptions& options = {});
std::vector<DialogueSample> parse_smd_text(std::string_view json_text, std::string_view name,
                                           const EntityTable& entities = {}, const SmdOptions& options = {});

// Maps the scenario intent (navigate | weather | schedule) to a domain tag.
std::string smd_domain(std::string_view intent);

inline constexpr std::string_view kSmdEntityFile = "kvret_entities.json";
std::string smd_file_name(std::string_view split);  // train | dev | test

}  // namespace glmp::data
