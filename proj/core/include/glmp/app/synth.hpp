// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace glmp::app {

struct BabiSynthOptions {
  std::size_t train = 1000;
  std::size_t dev = 1000;
  std::size_t test = 1000;
  std::size_t test_oov = 1000;
  std::uint64_t seed = 7;
};

struct SmdSynthOptions {
  std::size_t train = 2425;
  std::size_t dev = 302;
  std::size_t test = 304;
  std::uint64_t seed = 11;
};

// Task-1 style restaurant-booking dialogues in the bAbI dialogue text layout.
// `oov` draws cuisines and locations from a disjoint pool.
std::string synth_babi_task1(std::size_t dialogues, bool oov, std::uint64_t seed);
// KB listing covering the in-vocabulary and OOV restaurants.
std::string synth_babi_kb(std::uint64_t seed);
// Writes the four task-1 split files and the KB listing under their official names.
void write_synth_babi(const std::filesystem::path& dir, const BabiSynthOptions& options);

// In-car assistant dialogues (navigation, weather, schedule) in the KVRET JSON layout.
std::string synth_smd(std::size_t dialogues, std::uint64_t seed);
std::string synth_smd_entities();
void write_synth_smd(const std::filesystem::path& dir, const SmdSynthOptions& options);

}  // namespace glmp::app
