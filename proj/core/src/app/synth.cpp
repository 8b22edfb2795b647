// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/app/synth.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "glmp/data/babi.hpp"
#include "glmp/data/smd.hpp"
#include "glmp/numerics/rng.hpp"

namespace glmp::app {

using nlohmann::ordered_json;
using numerics::Rng;
using Words = std::vector<std::string>;

namespace {

const Words kCuisines = {"british", "cantonese", "french", "indian", "italian",
                         "japanese", "korean", "spanish", "thai", "vietnamese"};
const Words kLocations = {"bangkok", "beijing", "bombay", "hanoi", "london", "madrid", "paris", "rome", "seoul", "tokyo"};
const Words kOovCuisines = {"ethiopian", "mexican", "greek", "german", "turkish",
                            "brazilian", "moroccan", "polish", "russian", "lebanese"};
const Words kOovLocations = {"berlin", "dublin", "cairo", "lima", "oslo", "vienna", "sydney", "toronto", "nairobi", "athens"};
const Words kPeople = {"two", "four", "six", "eight"};
const Words kPrices = {"cheap", "moderate", "expensive"};

const std::string& pick(Rng& rng, const Words& w) { return w[rng.below(w.size())]; }

std::string fill(std::string tmpl, const std::map<std::string, std::string>& slots) {
  for (const auto& [k, v] : slots) {
    const std::string key = "{" + k + "}";
    for (auto pos = tmpl.find(key); pos != std::string::npos; pos = tmpl.find(key)) tmpl.replace(pos, key.size(), v);
  }
  return tmpl;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string synth_babi_task1(std::size_t dialogues, bool oov, std::uint64_t seed) {
  static const Words kGreet = {"hi", "hello", "good morning", "hey there", "hello there"};
  static const Words kAsk = {"any preference on a type of cuisine", "where should it be",
                             "how many people would be in your party", "which price range are looking for"};
  static const std::vector<Words> kAnswer = {
      {"with {cuisine} food", "i love {cuisine} food", "{cuisine} cuisine please", "with {cuisine} cuisine"},
      {"{location} please", "in {location}", "i'd like it in {location}", "{location}"},
      {"for {people} people please", "we will be {people}", "{people} people", "for {people} please"},
      {"in a {price} price range please", "i am looking for a {price} restaurant", "{price} please",
       "in a {price} price range"},
  };
  static const Words kPhrase = {"with {cuisine} food", "in {location}", "for {people} people", "in a {price} price range"};
  static const Words kOpen = {"can you book a table", "i'd like to book a table", "may i have a table",
                              "can you make a restaurant reservation", "i would like to book a table"};

  const Words& cuisines = oov ? kOovCuisines : kCuisines;
  const Words& locations = oov ? kOovLocations : kLocations;
  Rng rng(numerics::mix_seed(seed, oov ? 2 : 1));
  std::ostringstream out;
  for (std::size_t d = 0; d < dialogues; ++d) {
    std::map<std::string, std::string> slots = {{"cuisine", pick(rng, cuisines)},
                                                {"location", pick(rng, locations)},
                                                {"people", pick(rng, kPeople)},
                                                {"price", pick(rng, kPrices)}};
    std::vector<bool> given(4);
    std::string request = pick(rng, kOpen);
    for (std::size_t s = 0; s < 4; ++s) {
      given[s] = rng.bernoulli(0.5);
      if (given[s]) request += " " + fill(kPhrase[s], slots);
    }
    std::size_t line = 1;
    auto emit = [&](const std::string& user, const std::string& system) {
      out << line++ << ' ' << user << '\t' << system << '\n';
    };
    emit(pick(rng, kGreet), "hello what can i help you with today");
    emit(request, "i'm on it");
    std::string pending = "<SILENCE>";
    for (std::size_t s = 0; s < 4; ++s) {
      if (given[s]) continue;
      emit(pending, kAsk[s]);
      pending = fill(pick(rng, kAnswer[s]), slots);
    }
    emit(pending, "ok let me look into some options for you");
    emit("<SILENCE>", fill("api_call {cuisine} {location} {people} {price}", slots));
    out << '\n';
  }
  return out.str();
}

std::string synth_babi_kb(std::uint64_t seed) {
  Rng rng(numerics::mix_seed(seed, 3));
  std::ostringstream out;
  auto block = [&](const Words& cuisines, const Words& locations) {
    for (const auto& loc : locations) {
      for (const auto& cui : cuisines) {
        const std::string price = pick(rng, kPrices);
        const std::string stars = std::to_string(1 + rng.below(8));
        const std::string name = "resto_" + loc + "_" + price + "_" + cui + "_" + stars + "stars";
        out << "1 " << name << " R_phone " << name << "_phone\n";
        out << "1 " << name << " R_cuisine " << cui << '\n';
        out << "1 " << name << " R_address " << name << "_address\n";
        out << "1 " << name << " R_location " << loc << '\n';
        out << "1 " << name << " R_number " << pick(rng, kPeople) << '\n';
        out << "1 " << name << " R_price " << price << '\n';
        out << "1 " << name << " R_rating " << stars << '\n';
      }
    }
  };
  block(kCuisines, kLocations);
  block(kOovCuisines, kOovLocations);
  return out.str();
}

void write_synth_babi(const std::filesystem::path& dir, const BabiSynthOptions& o) {
  std::filesystem::create_directories(dir);
  using data::BabiSplit;
  write_text(dir / data::babi_file_name(1, BabiSplit::kTrain), synth_babi_task1(o.train, false, o.seed));
  write_text(dir / data::babi_file_name(1, BabiSplit::kDev), synth_babi_task1(o.dev, false, o.seed + 1));
  write_text(dir / data::babi_file_name(1, BabiSplit::kTest), synth_babi_task1(o.test, false, o.seed + 2));
  write_text(dir / data::babi_file_name(1, BabiSplit::kTestOov), synth_babi_task1(o.test_oov, true, o.seed + 3));
  write_text(dir / std::string(data::kBabiKbFile), synth_babi_kb(o.seed));
}

// ---------------------------------------------------------------------------

namespace {

const Words kPoiTypes = {"gas station", "coffee or tea place", "grocery store", "hospital", "parking garage",
                         "rest stop", "chinese restaurant", "pizza restaurant"};
const std::map<std::string, Words> kPoiNames = {
    {"gas station", {"valero", "chevron", "shell", "76", "mobil"}},
    {"coffee or tea place", {"starbucks", "peets coffee", "coupa", "philz"}},
    {"grocery store", {"safeway", "whole foods", "trader joes", "sigona farmers market"}},
    {"hospital", {"stanford express care", "palo alto medical foundation", "el camino hospital"}},
    {"parking garage", {"dish parking", "civic center garage", "palo alto garage r"}},
    {"rest stop", {"the westin", "comfort inn", "hotel keen", "four seasons"}},
    {"chinese restaurant", {"panda express", "tai pan", "p.f. changs", "mandarin roots"}},
    {"pizza restaurant", {"pizza hut", "dominos", "pizza my heart", "round table"}},
};
const Words kStreets = {"alester ave", "bedoin st", "el camino real", "arastradero rd", "ames ct", "cedar st",
                        "willows rd", "mission st", "venture ave", "broadway", "hacienda st", "marine st"};
const Words kDistances = {"1 miles", "2 miles", "3 miles", "4 miles", "5 miles", "6 miles", "7 miles"};
const Words kTraffic = {"no traffic", "moderate traffic", "heavy traffic", "road block nearby", "car collision nearby"};

const Words kWeatherPlaces = {"san francisco", "carson", "manhattan", "boston", "durham", "seattle", "atherton",
                              "mountain view", "redwood city", "new york", "danville", "oakland"};
const Words kDays = {"monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};
const Words kAttrs = {"rain", "snow", "dry", "cloudy", "foggy", "overcast", "windy", "clear skies", "hail",
                      "stormy", "humid", "drizzle"};

const Words kEvents = {"dinner", "lab appointment", "doctor appointment", "tennis activity", "conference",
                       "meeting", "yoga activity", "football activity", "optometrist appointment", "swimming activity"};
const Words kTimes = {"9am", "10am", "11am", "1pm", "2pm", "3pm", "5pm", "6pm", "7pm", "8pm"};
const Words kParties = {"tom", "martha", "jon", "ana", "father", "sister", "brother", "boss", "management", "hr"};
const Words kRooms = {"conference room 100", "conference room 50", "conference room 102", "room 215"};
const Words kAgendas = {"go over budget", "discuss the merger", "onboard new members", "go over quarterly report"};

std::string temp(Rng& rng, int lo, int hi) { return std::to_string(lo + static_cast<int>(rng.below(hi - lo + 1))) + "f"; }

ordered_json turn(const std::string& who, const std::string& text, bool end = false) {
  ordered_json t;
  t["turn"] = who;
  t["data"]["end_dialogue"] = end;
  t["data"]["utterance"] = text;
  return t;
}

ordered_json navigation(Rng& rng) {
  ordered_json kb;
  kb["column_names"] = {"poi", "poi_type", "address", "distance", "traffic_info"};
  kb["kb_title"] = "location information";
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> used;
  const std::size_t n = 4 + rng.below(3);
  while (rows.size() < n) {
    const auto& type = pick(rng, kPoiTypes);
    const auto& name = pick(rng, kPoiNames.at(type));
    if (!used.insert(name).second) continue;
    rows.push_back({{"poi", name},
                    {"poi_type", type},
                    {"address", std::to_string(100 + rng.below(900)) + " " + pick(rng, kStreets)},
                    {"distance", pick(rng, kDistances)},
                    {"traffic_info", pick(rng, kTraffic)}});
  }
  for (const auto& r : rows) kb["items"].push_back(r);
  const auto& target = rows[rng.below(rows.size())];
  ordered_json d = ordered_json::array();
  if (rng.bernoulli(0.5)) {
    d.push_back(turn("driver", fill(rng.bernoulli(0.5) ? "where is the nearest {t}" : "find me a {t} nearby",
                                    {{"t", target.at("poi_type")}})));
    d.push_back(turn("assistant", fill("the nearest {t} is {p} , {d} away at {a}",
                                       {{"t", target.at("poi_type")}, {"p", target.at("poi")},
                                        {"d", target.at("distance")}, {"a", target.at("address")}})));
  } else {
    d.push_back(turn("driver", fill(rng.bernoulli(0.5) ? "give me directions to {p}" : "how far is {p}",
                                    {{"p", target.at("poi")}})));
    d.push_back(turn("assistant", fill("{p} is {d} away at {a}",
                                       {{"p", target.at("poi")}, {"d", target.at("distance")},
                                        {"a", target.at("address")}})));
  }
  d.push_back(turn("driver", rng.bernoulli(0.5) ? "is there any traffic on the way" : "how is the traffic"));
  d.push_back(turn("assistant", fill("there is {x} on the route to {p}",
                                     {{"x", target.at("traffic_info")}, {"p", target.at("poi")}})));
  d.push_back(turn("driver", "thanks"));
  d.push_back(turn("assistant", "you're welcome , drive safely", true));
  ordered_json dlg;
  dlg["dialogue"] = d;
  dlg["scenario"]["kb"] = kb;
  dlg["scenario"]["task"]["intent"] = "navigate";
  return dlg;
}

ordered_json weather(Rng& rng) {
  ordered_json kb;
  ordered_json cols = {"location"};
  for (const auto& day : kDays) cols.push_back(day);
  cols.push_back("today");
  kb["column_names"] = cols;
  kb["kb_title"] = "weekly forecast";
  const std::string today = pick(rng, kDays);
  std::vector<std::string> places;
  std::set<std::string> used;
  const std::size_t n = 4 + rng.below(3);
  std::vector<std::map<std::string, std::string>> rows;
  while (rows.size() < n) {
    const auto& place = pick(rng, kWeatherPlaces);
    if (!used.insert(place).second) continue;
    std::map<std::string, std::string> row = {{"location", place}, {"today", today}};
    for (const auto& day : kDays) {
      const std::string lo = temp(rng, 20, 60);
      const std::string hi = temp(rng, 61, 100);
      row[day] = pick(rng, kAttrs) + ", low of " + lo + ", high of " + hi;
    }
    rows.push_back(row);
  }
  for (const auto& r : rows) {
    ordered_json item;
    item["location"] = r.at("location");
    for (const auto& day : kDays) item[day] = r.at(day);
    item["today"] = r.at("today");
    kb["items"].push_back(item);
  }
  const auto& row = rows[rng.below(rows.size())];
  const auto& day = pick(rng, kDays);
  const std::string cell = row.at(day);
  const std::string attr = cell.substr(0, cell.find(','));
  const auto lo_pos = cell.find("low of ") + 7;
  const std::string lo = cell.substr(lo_pos, cell.find(',', lo_pos) - lo_pos);
  const std::string hi = cell.substr(cell.find("high of ") + 8);
  ordered_json d = ordered_json::array();
  d.push_back(turn("driver", fill(rng.bernoulli(0.5) ? "what is the weather like in {l} on {d}"
                                                     : "what will the forecast be for {l} on {d}",
                                  {{"l", row.at("location")}, {"d", day}})));
  d.push_back(turn("assistant", fill("it will be {a} in {l} on {d}", {{"a", attr}, {"l", row.at("location")}, {"d", day}})));
  d.push_back(turn("driver", "what about the temperature"));
  d.push_back(turn("assistant", fill("on {d} there will be a low of {lo} and a high of {hi} in {l}",
                                     {{"d", day}, {"lo", lo}, {"hi", hi}, {"l", row.at("location")}})));
  d.push_back(turn("driver", "thank you"));
  d.push_back(turn("assistant", "you're welcome", true));
  ordered_json dlg;
  dlg["dialogue"] = d;
  dlg["scenario"]["kb"] = kb;
  dlg["scenario"]["task"]["intent"] = "weather";
  return dlg;
}

ordered_json schedule(Rng& rng) {
  ordered_json kb;
  kb["column_names"] = {"event", "time", "date", "room", "agenda", "party"};
  kb["kb_title"] = "calendar";
  std::vector<std::map<std::string, std::string>> rows;
  std::set<std::string> used;
  const std::size_t n = 3 + rng.below(4);
  while (rows.size() < n) {
    const auto& ev = pick(rng, kEvents);
    if (!used.insert(ev).second) continue;
    const bool meeting = ev == "meeting" || ev == "conference";
    rows.push_back({{"event", ev},
                    {"time", pick(rng, kTimes)},
                    {"date", pick(rng, kDays)},
                    {"room", meeting ? pick(rng, kRooms) : "-"},
                    {"agenda", meeting ? pick(rng, kAgendas) : "-"},
                    {"party", pick(rng, kParties)}});
  }
  for (const auto& r : rows) {
    ordered_json item;
    for (const char* c : {"event", "time", "date", "room", "agenda", "party"}) item[c] = r.at(c);
    kb["items"].push_back(item);
  }
  const auto& row = rows[rng.below(rows.size())];
  ordered_json d = ordered_json::array();
  d.push_back(turn("driver", fill(rng.bernoulli(0.5) ? "when is my {e}" : "what time is my {e}", {{"e", row.at("event")}})));
  d.push_back(turn("assistant", fill("your {e} is on {d} at {t}", {{"e", row.at("event")}, {"d", row.at("date")},
                                                                   {"t", row.at("time")}})));
  d.push_back(turn("driver", "who is attending"));
  if (row.at("room") != "-") {
    d.push_back(turn("assistant", fill("{p} will attend in {r} to {a}",
                                       {{"p", row.at("party")}, {"r", row.at("room")}, {"a", row.at("agenda")}})));
  } else {
    d.push_back(turn("assistant", fill("your {e} is with {p}", {{"e", row.at("event")}, {"p", row.at("party")}})));
  }
  d.push_back(turn("driver", "thanks"));
  d.push_back(turn("assistant", "you're welcome", true));
  ordered_json dlg;
  dlg["dialogue"] = d;
  dlg["scenario"]["kb"] = kb;
  dlg["scenario"]["task"]["intent"] = "schedule";
  return dlg;
}

}  // namespace

std::string synth_smd(std::size_t dialogues, std::uint64_t seed) {
  Rng rng(numerics::mix_seed(seed, 5));
  ordered_json all = ordered_json::array();
  for (std::size_t i = 0; i < dialogues; ++i) {
    switch (i % 3) {
      case 0: all.push_back(navigation(rng)); break;
      case 1: all.push_back(weather(rng)); break;
      default: all.push_back(schedule(rng)); break;
    }
  }
  return all.dump(1);
}

std::string synth_smd_entities() {
  ordered_json j;
  for (const auto& [type, names] : kPoiNames) {
    for (const auto& name : names) {
      ordered_json p;
      p["poi"] = name;
      p["type"] = type;
      j["poi"].push_back(p);
    }
  }
  j["poi_type"] = kPoiTypes;
  j["distance"] = kDistances;
  j["traffic_info"] = kTraffic;
  j["location"] = kWeatherPlaces;
  j["weekly_time"] = kDays;
  j["weather_attribute"] = kAttrs;
  Words temps;
  for (int t = 20; t <= 100; ++t) temps.push_back(std::to_string(t) + "f");
  j["temperature"] = temps;
  j["event"] = kEvents;
  j["time"] = kTimes;
  j["date"] = kDays;
  j["party"] = kParties;
  j["room"] = kRooms;
  j["agenda"] = kAgendas;
  return j.dump(1);
}

void write_synth_smd(const std::filesystem::path& dir, const SmdSynthOptions& o) {
  std::filesystem::create_directories(dir);
  write_text(dir / data::smd_file_name("train"), synth_smd(o.train, o.seed));
  write_text(dir / data::smd_file_name("dev"), synth_smd(o.dev, o.seed + 1));
  write_text(dir / data::smd_file_name("test"), synth_smd(o.test, o.seed + 2));
  write_text(dir / std::string(data::kSmdEntityFile), synth_smd_entities());
}

}  // namespace glmp::app
