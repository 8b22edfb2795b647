// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "glmp/numerics/params.hpp"

namespace glmp::numerics {

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// A parameter store plus an opaque metadata blob (model config, vocabulary).
struct Checkpoint {
  ParamStore params;
  std::string metadata;
};

// Binary little-endian container; see docs/formats.md. Round trips are bit-exact.
std::vector<std::uint8_t> encode_checkpoint(const ParamStore& params, const std::string& metadata);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t>& bytes);

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params, const std::string& metadata);
Checkpoint load_checkpoint(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes);

}  // namespace glmp::numerics
