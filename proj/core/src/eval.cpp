// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace glmp::eval {

namespace {

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": " + std::to_string(a) + " predictions for " +
                                std::to_string(b) + " references");
  }
  if (a == 0) throw std::invalid_argument(std::string(what) + ": empty set");
}

bool known_domain(const std::string& d) {
  return std::find_if(kDomains.begin(), kDomains.end(), [&](const char* k) { return d == k; }) != kDomains.end();
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

double per_response_accuracy(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds) {
  check_sizes(predictions.size(), golds.size(), "per_response_accuracy");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < golds.size(); ++i) correct += predictions[i] == golds[i] ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(golds.size());
}

double completion(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds,
                  const std::vector<std::string>& dialogue_ids) {
  check_sizes(predictions.size(), golds.size(), "completion");
  check_sizes(dialogue_ids.size(), golds.size(), "completion");
  std::unordered_map<std::string, bool> ok;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    auto [it, inserted] = ok.try_emplace(dialogue_ids[i], true);
    it->second = it->second && predictions[i] == golds[i];
  }
  std::size_t done = 0;
  for (const auto& [id, good] : ok) done += good ? 1 : 0;
  return static_cast<double>(done) / static_cast<double>(ok.size());
}

BleuStats bleu_stats(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds) {
  check_sizes(predictions.size(), golds.size(), "bleu");
  BleuStats st;
  for (std::size_t s = 0; s < golds.size(); ++s) {
    const auto& hyp = predictions[s];
    const auto& ref = golds[s];
    st.hypothesis_length += hyp.size();
    st.reference_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      if (hyp.size() < n) continue;
      std::map<std::vector<std::string>, std::size_t> ref_counts;
      for (std::size_t i = 0; i + n <= ref.size(); ++i) ++ref_counts[Tokens(ref.begin() + i, ref.begin() + i + n)];
      std::map<std::vector<std::string>, std::size_t> hyp_counts;
      for (std::size_t i = 0; i + n <= hyp.size(); ++i) ++hyp_counts[Tokens(hyp.begin() + i, hyp.begin() + i + n)];
      for (const auto& [gram, c] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) st.matches[n - 1] += std::min(c, it->second);
      }
      st.totals[n - 1] += hyp.size() - n + 1;
    }
  }
  if (st.hypothesis_length == 0) {
    st.brevity_penalty = 0.0;
    st.score = 0.0;
    return st;
  }
  st.brevity_penalty = st.hypothesis_length < st.reference_length
                           ? std::exp(1.0 - static_cast<double>(st.reference_length) /
                                                static_cast<double>(st.hypothesis_length))
                           : 1.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    if (st.matches[n] == 0 || st.totals[n] == 0) {
      st.score = 0.0;
      return st;
    }
    log_sum += std::log(static_cast<double>(st.matches[n]) / static_cast<double>(st.totals[n]));
  }
  st.score = 100.0 * st.brevity_penalty * std::exp(log_sum / 4.0);
  return st;
}

double bleu(const std::vector<Tokens>& predictions, const std::vector<Tokens>& golds) {
  return bleu_stats(predictions, golds).score;
}

double F1Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double F1Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double F1Counts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

F1Counts& F1Counts::operator+=(const F1Counts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

EntityF1 entity_f1(const std::vector<Tokens>& predictions, const std::vector<Tokens>& gold_entities,
                   const std::vector<std::string>& domains, const data::EntityTable& table,
                   const std::vector<Tokens>* local_entities) {
  check_sizes(predictions.size(), gold_entities.size(), "entity_f1");
  check_sizes(domains.size(), gold_entities.size(), "entity_f1");
  if (local_entities) check_sizes(local_entities->size(), gold_entities.size(), "entity_f1");
  EntityF1 out;
  for (const char* d : kDomains) out.per_domain[d] = {};
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (!known_domain(domains[i])) throw std::invalid_argument("unknown domain tag '" + domains[i] + "'");
    if (gold_entities[i].empty()) continue;
    const std::set<std::string> gold(gold_entities[i].begin(), gold_entities[i].end());
    std::set<std::string> local;
    if (local_entities) local.insert((*local_entities)[i].begin(), (*local_entities)[i].end());
    std::set<std::string> pred;
    for (const auto& tok : predictions[i]) {
      if (table.contains(tok) || local.contains(tok) || gold.contains(tok)) pred.insert(tok);
    }
    F1Counts c;
    for (const auto& g : gold) (pred.contains(g) ? c.tp : c.fn) += 1;
    for (const auto& p : pred) c.fp += gold.contains(p) ? 0 : 1;
    out.overall += c;
    out.per_domain[domains[i]] += c;
  }
  return out;
}

std::map<std::string, std::string> EvalReport::entries() const {
  std::map<std::string, std::string> e;
  e["samples"] = std::to_string(samples);
  e["dialogues"] = std::to_string(dialogues);
  e["per_response_accuracy"] = num(per_response_accuracy);
  e["completion_rate"] = num(completion_rate);
  e["bleu"] = num(bleu);
  auto put = [&](const std::string& prefix, const F1Counts& c) {
    e[prefix] = num(c.f1());
    e[prefix + ".precision"] = num(c.precision());
    e[prefix + ".recall"] = num(c.recall());
    e[prefix + ".tp"] = std::to_string(c.tp);
    e[prefix + ".fp"] = std::to_string(c.fp);
    e[prefix + ".fn"] = std::to_string(c.fn);
    e[prefix + ".undefined"] = c.undefined() ? "1" : "0";
  };
  put("entity_f1", entity.overall);
  for (const auto& [d, c] : entity.per_domain) put("entity_f1." + d, c);
  return e;
}

std::string EvalReport::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + " " + v + "\n";
  return out;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["samples"] = samples;
  j["dialogues"] = dialogues;
  j["per_response_accuracy"] = per_response_accuracy;
  j["completion_rate"] = completion_rate;
  j["bleu"] = bleu;
  auto counts = [](const F1Counts& c) {
    nlohmann::ordered_json o;
    o["f1"] = c.f1();
    o["precision"] = c.precision();
    o["recall"] = c.recall();
    o["tp"] = c.tp;
    o["fp"] = c.fp;
    o["fn"] = c.fn;
    o["undefined"] = c.undefined();
    return o;
  };
  j["entity_f1"] = counts(entity.overall);
  for (const auto& [d, c] : entity.per_domain) j["entity_f1_by_domain"][d] = counts(c);
  return j.dump();
}

EvalReport evaluate(const std::vector<data::DialogueSample>& samples, const std::vector<Tokens>& predictions,
                    const data::EntityTable& table) {
  check_sizes(predictions.size(), samples.size(), "evaluate");
  std::vector<Tokens> golds, entities, local;
  std::vector<std::string> ids, domains;
  for (const auto& s : samples) {
    golds.push_back(s.gold);
    entities.push_back(s.entities);
    ids.push_back(s.dialogue_id);
    domains.push_back(s.domain);
    Tokens kb;
    for (const auto& t : s.kb) {
      kb.push_back(t.subject);
      kb.push_back(t.object);
    }
    local.push_back(std::move(kb));
  }
  EvalReport r;
  r.samples = samples.size();
  r.dialogues = data::dialogue_ids(samples).size();
  r.per_response_accuracy = per_response_accuracy(predictions, golds);
  r.completion_rate = completion(predictions, golds, ids);
  r.bleu = bleu(predictions, golds);
  r.entity = entity_f1(predictions, entities, domains, table, &local);
  return r;
}

}  // namespace glmp::eval
