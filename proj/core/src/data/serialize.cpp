// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "glmp/errors.hpp"

namespace glmp::data {

using nlohmann::json;

namespace {

json triplets_to_json(const std::vector<TripletText>& ts) {
  json a = json::array();
  for (const auto& t : ts) a.push_back({t.subject, t.relation, t.object});
  return a;
}

std::vector<TripletText> triplets_from_json(const json& a) {
  std::vector<TripletText> out;
  for (const auto& t : a) {
    if (!t.is_array() || t.size() != 3) throw ParseError("triplet must be a 3-element array", 0);
    out.push_back({t[0].get<std::string>(), t[1].get<std::string>(), t[2].get<std::string>()});
  }
  return out;
}

}  // namespace

std::string sample_to_json(const DialogueSample& s) {
  json j;
  j["format"] = kSampleFormatName;
  j["version"] = kSampleFormatVersion;
  j["dialogue_id"] = s.dialogue_id;
  j["turn"] = s.turn;
  j["domain"] = s.domain;
  j["kb"] = triplets_to_json(s.kb);
  j["history"] = triplets_to_json(s.history);
  j["gold"] = s.gold;
  j["sketch"] = s.sketch;
  j["global_label"] = s.global_label;
  j["local_label"] = s.local_label;
  j["entities"] = s.entities;
  return j.dump();
}

DialogueSample sample_from_json(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed sample record: ") + e.what(), 0);
  }
  if (j.value("format", "") != kSampleFormatName) throw VersionError("not a glmp sample record");
  if (j.value("version", -1) != kSampleFormatVersion) {
    throw VersionError("sample format version " + std::to_string(j.value("version", -1)) + " (expected " +
                       std::to_string(kSampleFormatVersion) + ")");
  }
  try {
    DialogueSample s;
    s.dialogue_id = j.at("dialogue_id").get<std::string>();
    s.turn = j.at("turn").get<std::size_t>();
    s.domain = j.at("domain").get<std::string>();
    s.kb = triplets_from_json(j.at("kb"));
    s.history = triplets_from_json(j.at("history"));
    s.gold = j.at("gold").get<std::vector<std::string>>();
    s.sketch = j.at("sketch").get<std::vector<std::string>>();
    s.global_label = j.at("global_label").get<std::vector<int>>();
    s.local_label = j.at("local_label").get<std::vector<std::size_t>>();
    s.entities = j.at("entities").get<std::vector<std::string>>();
    return s;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sample record: ") + e.what(), 0);
  }
}

void write_samples(const std::filesystem::path& path, const std::vector<DialogueSample>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& s : samples) out << sample_to_json(s) << '\n';
}

std::vector<DialogueSample> read_samples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<DialogueSample> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(sample_from_json(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

std::string vocab_to_json(const Vocabulary& vocab) { return json(vocab.tokens()).dump(); }

Vocabulary vocab_from_json(std::string_view text) {
  try {
    return Vocabulary::from_tokens(json::parse(text).get<std::vector<std::string>>());
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad vocabulary: ") + e.what(), 0);
  }
}

}  // namespace glmp::data
