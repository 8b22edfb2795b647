// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/app/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "glmp/numerics/adam.hpp"

namespace glmp::app {

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is visited once.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct SampleLoss {
  double total = 0.0, g = 0.0, v = 0.0, l = 0.0;
};

}  // namespace

std::string EpochRecord::to_json() const {
  nlohmann::ordered_json j;
  j["epoch"] = epoch;
  j["loss"] = loss;
  j["loss_g"] = loss_g;
  j["loss_v"] = loss_v;
  j["loss_l"] = loss_l;
  j["dev_metric"] = dev_metric;
  j["lr"] = lr;
  j["improved"] = improved;
  return j.dump();
}

std::vector<Prediction> predict(const Model& model, const std::vector<data::DialogueSample>& samples) {
  std::vector<Prediction> out(samples.size());
  const auto options = model.forward_options();
  parallel_for(samples.size(), model.config.threads, [&](std::size_t i) {
    const auto enc = data::encode_sample(samples[i], model.vocab);
    auto inf = decoder::infer(model.params, model.handles, model.vocab, enc, model.config.max_decode_len, options);
    out[i].tokens = std::move(inf.tokens);
    out[i].sketch = std::move(inf.sketch);
  });
  return out;
}

eval::EvalReport evaluate_model(const Model& model, const std::vector<data::DialogueSample>& samples) {
  const auto preds = predict(model, samples);
  std::vector<eval::Tokens> tokens;
  tokens.reserve(preds.size());
  for (const auto& p : preds) tokens.push_back(p.tokens);
  return eval::evaluate(samples, tokens, model.entities);
}

double dev_metric(const RunConfig& config, const eval::EvalReport& report) {
  return config.is_babi() ? report.per_response_accuracy : report.bleu;
}

TrainResult train(const RunConfig& config, const std::vector<data::DialogueSample>& train_samples,
                  const std::vector<data::DialogueSample>& dev_samples, const data::EntityTable& entities,
                  const EpochCallback& on_epoch) {
  if (train_samples.empty()) throw std::invalid_argument("no training samples");
  if (dev_samples.empty()) throw std::invalid_argument("no dev samples");
  auto vocab = data::build_vocab(train_samples, config.min_count);
  Model model = Model::create(config, std::move(vocab), entities);

  std::vector<data::EncodedSample> encoded;
  encoded.reserve(train_samples.size());
  for (const auto& s : train_samples) encoded.push_back(data::encode_sample(s, model.vocab));

  TrainResult result;
  result.best_metric = -std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> best_bytes;
  double lr = config.lr;
  std::size_t stale = 0;
  const auto base_options = model.forward_options();

  std::vector<std::size_t> order(encoded.size());
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    numerics::Rng shuffle_rng(numerics::mix_seed(config.seed, 0x5eed0000 + epoch));
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch_index) {
      const std::size_t count = std::min(config.batch_size, order.size() - start);
      std::vector<numerics::GradientBuffer> grads(count, numerics::GradientBuffer(model.params));
      std::vector<SampleLoss> losses(count);
      parallel_for(count, config.threads, [&](std::size_t b) {
        const std::size_t idx = order[start + b];
        const std::uint64_t sample_seed = numerics::mix_seed(numerics::mix_seed(config.seed, epoch), idx);
        const auto masked = data::mask_tokens(encoded[idx], config.mask_ratio, sample_seed);
        auto options = base_options;
        options.dropout = config.dropout;
        options.dropout_seed = numerics::mix_seed(sample_seed, 0xd0);
        numerics::Tape tape(model.params);
        auto bundle = decoder::joint_loss(tape, model.handles, masked, options);
        losses[b] = {bundle.value(), bundle.loss_g.scalar(), bundle.loss_v.scalar(), bundle.loss_l.scalar()};
        if (!std::isfinite(losses[b].total)) return;
        tape.backward(bundle.total, grads[b]);
      });
      numerics::GradientBuffer total(model.params);
      for (std::size_t b = 0; b < count; ++b) {
        if (!std::isfinite(losses[b].total)) {
          throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + " batch " +
                              std::to_string(batch_index) + " (sample " +
                              train_samples[order[start + b]].dialogue_id + " turn " +
                              std::to_string(train_samples[order[start + b]].turn) + ")");
        }
        total.accumulate(grads[b]);
        rec.loss += losses[b].total;
        rec.loss_g += losses[b].g;
        rec.loss_v += losses[b].v;
        rec.loss_l += losses[b].l;
      }
      total.scale(1.0 / static_cast<double>(count));
      if (config.clip_norm > 0.0) numerics::clip_grad_norm(total, config.clip_norm);
      try {
        numerics::adam_step(model.params, total, lr);
      } catch (const TrainingError& e) {
        throw TrainingError(std::string(e.what()) + " in epoch " + std::to_string(epoch) + " batch " +
                            std::to_string(batch_index));
      }
    }
    const double n = static_cast<double>(encoded.size());
    rec.loss /= n;
    rec.loss_g /= n;
    rec.loss_v /= n;
    rec.loss_l /= n;

    rec.dev_metric = dev_metric(config, evaluate_model(model, dev_samples));
    rec.improved = rec.dev_metric > result.best_metric;
    if (rec.improved) {
      result.best_metric = rec.dev_metric;
      result.best_epoch = epoch;
      best_bytes = model.encode();
      stale = 0;
    } else {
      ++stale;
      if (stale % config.lr_patience == 0) lr = std::max(lr * config.lr_decay, config.lr_floor);
    }
    result.history.push_back(rec);
    if (on_epoch) on_epoch(rec);

    if (config.stop_at >= 0.0 && rec.dev_metric >= config.stop_at) {
      result.stop_reason = "dev metric reached " + std::to_string(config.stop_at);
      break;
    }
    if (stale >= config.patience) {
      result.stop_reason = "no dev improvement for " + std::to_string(stale) + " epochs";
      break;
    }
  }
  if (result.stop_reason.empty()) result.stop_reason = "epoch budget exhausted";
  result.final_lr = lr;
  result.best = Model::decode(best_bytes);
  return result;
}

void write_attention_trace(const Model& model, const data::DialogueSample& sample, std::ostream& out) {
  const auto enc = data::encode_sample(sample, model.vocab);
  const auto options = model.forward_options();
  numerics::Tape tape(model.params, false);
  auto store = knowledge::build_memory(tape, model.handles.memory, enc.kb, enc.dialogue, data::Vocabulary::kNull,
                                       enc.objects);
  encoder::EncoderOptions eopts{options.write_hidden, 0.0, nullptr};
  auto ctx = encoder::encode(tape, enc.history, store, model.handles.encoder, eopts);
  auto plain = knowledge::build_memory(tape, model.handles.memory, enc.kb, enc.dialogue, data::Vocabulary::kNull,
                                       enc.objects);
  if (options.write_hidden) plain.write_hidden(ctx.hidden);
  if (options.global_filter) store.apply_global_filter(ctx.global_pointer);
  auto state = decoder::decode_greedy(tape, ctx, store, model.handles, model.vocab, model.config.max_decode_len);

  std::vector<std::string> labels;
  for (std::size_t i = 0; i < sample.memory_size(); ++i) {
    const auto& t = i < sample.kb.size() ? sample.kb[i] : sample.history[i - sample.kb.size()];
    labels.push_back("(" + t.subject + "," + t.relation + "," + t.object + ")");
  }
  labels.push_back(std::string(data::Vocabulary::kNullToken));

  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  const auto g = ctx.global_pointer.to_vector();
  out << "step\tsketch\temitted\tcopied\tposition\tmemory\tglobal\tunfiltered\tfinal\n";
  for (std::size_t t = 0; t < state.steps.size(); ++t) {
    const auto& step = state.steps[t];
    const auto unfiltered = knowledge::local_pointer_query(plain, step.query).distribution.to_vector();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      out << t + 1 << '\t' << model.vocab.word(step.sketch_token) << '\t' << step.emitted << '\t'
          << (step.copied ? std::to_string(*step.copied) : std::string("-")) << '\t' << i << '\t' << labels[i]
          << '\t' << (i < g.size() ? num(g[i]) : std::string("NA")) << '\t' << num(unfiltered[i]) << '\t'
          << num(step.pointer[i] * step.record[i]) << '\n';
    }
  }
}

std::vector<AblationRow> run_ablation(const RunConfig& config, const std::vector<data::DialogueSample>& train_samples,
                                      const std::vector<data::DialogueSample>& dev_samples,
                                      const std::vector<data::DialogueSample>& test_samples,
                                      const data::EntityTable& entities, const std::vector<std::string>& variants) {
  std::vector<AblationRow> rows;
  for (const auto& v : variants) {
    RunConfig c = config;
    c.no_hidden_write = v == "no_h" || v == "no_hg";
    c.no_global_filter = v == "no_g" || v == "no_hg";
    if (v != "full" && v != "no_h" && v != "no_g" && v != "no_hg") {
      throw std::invalid_argument("unknown ablation variant '" + v + "' (full|no_h|no_g|no_hg)");
    }
    auto result = train(c, train_samples, dev_samples, entities);
    rows.push_back({v, evaluate_model(result.best, test_samples), result.best.hash()});
  }
  return rows;
}

}  // namespace glmp::app
