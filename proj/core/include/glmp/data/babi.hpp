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

inline constexpr std::string_view kUserSpeaker = "$user";
inline constexpr std::string_view kSystemSpeaker = "$system";

std::string turn_tag(std::size_t exchange);

// Restaurant KB listing ("N subject relation object" lines). Subjects are typed R_name.
EntityTable load_babi_entities(const std::filesystem::path& path);
EntityTable parse_babi_entities(std::string_view text);

// One sample per system turn. KB fact lines found inside a dialogue are added
// to its KB and to a copy of `entities` used for delexicalization.
std::vector<DialogueSample> parse_babi(const std::filesystem::path& path, const EntityTable& entities = {});
std::vector<DialogueSample> parse_babi_text(std::string_view text, std::string_view name,
                                            const EntityTable& entities = {});

enum class BabiSplit { kTrain, kDev, kTest, kTestOov };

BabiSplit parse_babi_split(std::string_view name);
// Official file name, e.g. dialog-babi-task1-API-calls-tst-OOV.txt
std::string babi_file_name(int task, BabiSplit split);
inline constexpr std::string_view kBabiKbFile = "dialog-babi-kb-all.txt";

}  // namespace glmp::data
