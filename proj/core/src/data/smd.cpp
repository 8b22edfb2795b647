// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/smd.hpp"

#include <fstream>
#include <optional>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "glmp/data/babi.hpp"
#include "glmp/errors.hpp"

namespace glmp::data {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
  }
}

std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  return {};
}

bool empty_cell(const std::string& s) {
  const auto c = canonical_entity(s);
  return c.empty() || c == "-";
}

std::vector<std::string> split_parts(const std::string& cell) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= cell.size()) {
    auto end = cell.find(',', pos);
    if (end == std::string::npos) end = cell.size();
    auto part = cell.substr(pos, end - pos);
    if (!empty_cell(part)) out.push_back(part);
    pos = end + 1;
  }
  return out;
}

// One KB cell -> (relation, object) pairs. Weather forecasts such as
// "rain, low of 50f, high of 70f" fan out into one pair per clause, with
// the temperatures keyed by <column>_low / <column>_high.
std::vector<std::pair<std::string, std::string>> expand_cell(const std::string& column, const std::string& cell,
                                                             bool weather) {
  std::vector<std::pair<std::string, std::string>> out;
  if (!weather) {
    out.emplace_back(column, canonical_entity(cell));
    return out;
  }
  static const std::regex kTemp(R"(^\s*(low|high)\s+of\s+(.+?)\s*$)", std::regex::icase);
  for (const auto& part : split_parts(cell)) {
    std::smatch m;
    if (std::regex_match(part, m, kTemp)) {
      out.emplace_back(column + "_" + canonical_entity(m[1].str()), canonical_entity(m[2].str()));
    } else {
      out.emplace_back(column, canonical_entity(part));
    }
  }
  return out;
}

}  // namespace

std::string smd_domain(std::string_view intent) {
  if (intent == "navigate" || intent == "navigation") return "navigation";
  if (intent == "weather") return "weather";
  if (intent == "schedule") return "schedule";
  throw std::invalid_argument("unknown SMD intent '" + std::string(intent) + "'");
}

std::string smd_file_name(std::string_view split) {
  if (split == "train") return "kvret_train_public.json";
  if (split == "dev") return "kvret_dev_public.json";
  if (split == "test") return "kvret_test_public.json";
  throw std::invalid_argument("unknown SMD split '" + std::string(split) + "' (train|dev|test)");
}

EntityTable parse_smd_entities(std::string_view json_text) {
  const json doc = parse_json(json_text);
  if (!doc.is_object()) throw ParseError("entity listing must be a JSON object", 0);
  EntityTable table;
  for (const auto& [key, values] : doc.items()) {
    if (!values.is_array()) continue;
    for (const auto& v : values) {
      if (v.is_object()) {
        for (const auto& [field, cell] : v.items()) {
          const std::string slot = field == "type" ? key + "_type" : field;
          const auto text = cell_text(cell);
          if (!empty_cell(text)) table.add(text, slot);
        }
      } else {
        const auto text = cell_text(v);
        if (!empty_cell(text)) table.add(text, key);
      }
    }
  }
  return table;
}

EntityTable load_smd_entities(const std::filesystem::path& path) { return parse_smd_entities(read_file(path)); }

std::vector<DialogueSample> parse_smd(const std::filesystem::path& path, const EntityTable& entities,
                                      const SmdOptions& options) {
  return parse_smd_text(read_file(path), path.stem().string(), entities, options);
}

std::vector<DialogueSample> parse_smd_text(std::string_view json_text, std::string_view name,
                                           const EntityTable& entities, const SmdOptions& options) {
  const json doc = parse_json(json_text);
  if (!doc.is_array()) throw ParseError("SMD file must hold a JSON array of dialogues", 0);
  std::vector<DialogueSample> out;
  std::size_t index = 0;
  for (const auto& dlg : doc) {
    ++index;
    const std::string where = "dialogue " + std::to_string(index);
    if (!dlg.contains("scenario") || !dlg["scenario"].contains("kb") || dlg["scenario"]["kb"].is_null()) {
      throw ParseError(where + ": missing scenario.kb", 0);
    }
    const json& scenario = dlg["scenario"];
    const json& kbj = scenario["kb"];
    std::string intent = scenario.value("task", json::object()).value("intent", "");
    if (intent.empty()) intent = kbj.value("kb_title", "");
    const std::string domain = smd_domain(intent == "location information" ? "navigate"
                                          : intent == "calendar"          ? "schedule"
                                          : intent == "weekly forecast"   ? "weather"
                                                                          : intent);
    const bool weather = domain == "weather";

    std::vector<std::string> columns;
    if (kbj.contains("column_names") && kbj["column_names"].is_array()) {
      for (const auto& c : kbj["column_names"]) columns.push_back(c.get<std::string>());
    }
    EntityTable table = entities;
    std::vector<TripletText> kb;
    const json items = kbj.value("items", json::array());
    if (!items.is_null()) {
      for (const auto& row : items) {
        if (!row.is_object()) throw ParseError(where + ": KB row must be an object", 0);
        std::vector<std::string> cols = columns;
        if (cols.empty()) {
          for (const auto& [k, v] : row.items()) cols.push_back(k);
        }
        if (cols.empty() || !row.contains(cols.front())) continue;
        const std::string subject = canonical_entity(cell_text(row[cols.front()]));
        if (empty_cell(subject)) continue;
        table.add(subject, cols.front());
        if (options.subject_triplets) kb.push_back({subject, canonical_entity(cols.front()), subject});
        for (std::size_t c = 1; c < cols.size(); ++c) {
          if (!row.contains(cols[c])) continue;
          const auto text = cell_text(row[cols[c]]);
          if (empty_cell(text)) continue;
          for (auto& [rel, obj] : expand_cell(canonical_entity(cols[c]), text, weather)) {
            table.add(obj, weather && rel != "today" ? (rel.ends_with("_low") || rel.ends_with("_high")
                                                             ? "temperature"
                                                             : "weather_attribute")
                                                     : rel);
            kb.push_back({subject, rel, obj});
          }
        }
      }
    }

    if (!dlg.contains("dialogue") || !dlg["dialogue"].is_array()) {
      throw ParseError(where + ": missing dialogue turns", 0);
    }
    struct Exchange {
      std::vector<std::string> user;
      std::vector<std::string> system;
    };
    std::vector<Exchange> exchanges;
    std::optional<std::size_t> open_sample;
    for (const auto& turn : dlg["dialogue"]) {
      const std::string speaker = turn.value("turn", "");
      const std::string utterance = turn.contains("data") ? turn["data"].value("utterance", "") : "";
      auto tokens = tokenize(utterance, &table);
      if (speaker == "driver") {
        if (exchanges.empty() || !exchanges.back().system.empty()) {
          exchanges.emplace_back();
          open_sample.reset();
        }
        auto& u = exchanges.back().user;
        u.insert(u.end(), tokens.begin(), tokens.end());
      } else if (speaker == "assistant") {
        if (exchanges.empty()) exchanges.emplace_back();
        if (tokens.empty()) continue;
        auto& ex = exchanges.back();
        if (!ex.system.empty()) {
          ex.system.insert(ex.system.end(), tokens.begin(), tokens.end());
          if (open_sample) {
            out[*open_sample].gold = ex.system;
            label_sample(out[*open_sample], table);
          }
          continue;
        }
        ex.system = tokens;
        DialogueSample s;
        s.dialogue_id = std::string(name) + ":" + std::to_string(index);
        s.turn = exchanges.size();
        s.domain = domain;
        s.kb = kb;
        for (std::size_t e = 0; e < exchanges.size(); ++e) {
          const std::string tag = turn_tag(e + 1);
          for (const auto& w : exchanges[e].user) s.history.push_back({std::string(kUserSpeaker), tag, w});
          if (e + 1 == exchanges.size()) break;
          for (const auto& w : exchanges[e].system) s.history.push_back({std::string(kSystemSpeaker), tag, w});
        }
        if (s.history.empty()) continue;
        s.gold = ex.system;
        label_sample(s, table);
        open_sample = out.size();
        out.push_back(std::move(s));
      } else {
        throw ParseError(where + ": unknown speaker '" + speaker + "'", 0);
      }
    }
  }
  return out;
}

}  // namespace glmp::data
