// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/data/babi.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "glmp/errors.hpp"

namespace glmp::data {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Line {
  std::size_t number = 0;  // file line
  std::string body;        // text after the leading index
  bool blank = true;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    ++lineno;
    Line line;
    line.number = lineno;
    std::size_t first = raw.find_first_not_of(" \t");
    if (first != std::string_view::npos) {
      line.blank = false;
      raw.remove_prefix(first);
      std::size_t sp = 0;
      while (sp < raw.size() && std::isdigit(static_cast<unsigned char>(raw[sp]))) ++sp;
      if (sp == 0 || sp >= raw.size() || raw[sp] != ' ') {
        throw ParseError("expected '<index> <text>'", lineno);
      }
      line.body = std::string(raw.substr(sp + 1));
    }
    out.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(canonical_entity(w));
  return out;
}

}  // namespace

std::string turn_tag(std::size_t exchange) { return "turn" + std::to_string(exchange); }

EntityTable parse_babi_entities(std::string_view text) {
  EntityTable table;
  for (const auto& line : split_lines(text)) {
    if (line.blank) continue;
    auto w = words(line.body);
    if (w.size() != 3) throw ParseError("KB line needs subject relation object", line.number);
    table.add(w[0], "r_name");
    table.add(w[2], w[1]);
  }
  return table;
}

EntityTable load_babi_entities(const std::filesystem::path& path) { return parse_babi_entities(read_file(path)); }

std::vector<DialogueSample> parse_babi(const std::filesystem::path& path, const EntityTable& entities) {
  return parse_babi_text(read_file(path), path.stem().string(), entities);
}

std::vector<DialogueSample> parse_babi_text(std::string_view text, std::string_view name,
                                            const EntityTable& entities) {
  std::vector<DialogueSample> out;
  struct Exchange {
    std::vector<std::string> user;
    std::vector<std::string> system;
  };
  std::vector<Exchange> exchanges;
  std::vector<TripletText> kb;
  EntityTable table = entities;
  std::size_t dialogue = 0;
  bool open = false;

  auto history_for = [&](std::size_t upto) {
    std::vector<TripletText> h;
    for (std::size_t e = 0; e <= upto; ++e) {
      const std::string tag = turn_tag(e + 1);
      for (const auto& w : exchanges[e].user) h.push_back({std::string(kUserSpeaker), tag, w});
      if (e == upto) break;
      for (const auto& w : exchanges[e].system) h.push_back({std::string(kSystemSpeaker), tag, w});
    }
    return h;
  };

  for (const auto& line : split_lines(text)) {
    if (line.blank) {
      if (open) {
        exchanges.clear();
        kb.clear();
        table = entities;
        open = false;
      }
      continue;
    }
    if (!open) {
      ++dialogue;
      open = true;
    }
    const auto tab = line.body.find('\t');
    if (tab == std::string::npos) {
      auto w = words(line.body);
      if (w.size() != 3) throw ParseError("KB fact needs subject relation object", line.number);
      kb.push_back({w[0], w[1], w[2]});
      table.add(w[0], "r_name");
      table.add(w[2], w[1]);
      continue;
    }
    Exchange ex;
    ex.user = tokenize(line.body.substr(0, tab), &table);
    ex.system = tokenize(line.body.substr(tab + 1), &table);
    if (ex.system.empty()) throw ParseError("empty system utterance", line.number);
    if (ex.user.empty()) throw ParseError("empty user utterance", line.number);
    exchanges.push_back(std::move(ex));

    DialogueSample s;
    s.dialogue_id = std::string(name) + ":" + std::to_string(dialogue);
    s.turn = exchanges.size();
    s.domain = "restaurant";
    s.kb = kb;
    s.history = history_for(exchanges.size() - 1);
    s.gold = exchanges.back().system;
    label_sample(s, table);
    out.push_back(std::move(s));
  }
  return out;
}

BabiSplit parse_babi_split(std::string_view name) {
  if (name == "train" || name == "trn") return BabiSplit::kTrain;
  if (name == "dev") return BabiSplit::kDev;
  if (name == "test" || name == "tst") return BabiSplit::kTest;
  if (name == "oov" || name == "test-oov" || name == "tst-OOV") return BabiSplit::kTestOov;
  throw std::invalid_argument("unknown bAbI split '" + std::string(name) + "' (train|dev|test|oov)");
}

std::string babi_file_name(int task, BabiSplit split) {
  static const char* const kNames[] = {"API-calls", "API-refine", "options", "phone-address", "full-dialogs"};
  if (task < 1 || task > 5) throw std::invalid_argument("bAbI task must be 1..5");
  std::string suffix;
  switch (split) {
    case BabiSplit::kTrain: suffix = "trn"; break;
    case BabiSplit::kDev: suffix = "dev"; break;
    case BabiSplit::kTest: suffix = "tst"; break;
    case BabiSplit::kTestOov: suffix = "tst-OOV"; break;
  }
  return "dialog-babi-task" + std::to_string(task) + "-" + kNames[task - 1] + "-" + suffix + ".txt";
}

}  // namespace glmp::data
