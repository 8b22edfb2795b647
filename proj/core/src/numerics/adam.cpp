// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#include "glmp/numerics/adam.hpp"

#include <cmath>

namespace glmp::numerics {

void adam_step(ParamStore& params, const GradientBuffer& grads, double learning_rate, const AdamConfig& config) {
  if (!(learning_rate > 0.0)) throw std::invalid_argument("adam_step: learning rate must be positive");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Tensor* g = grads.find(ParamId{i});
    if (g != nullptr && !g->all_finite()) {
      throw TrainingError("non-finite gradient for parameter '" + params[ParamId{i}].name + "'");
    }
  }
  const auto t = static_cast<double>(params.step() + 1);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = params[ParamId{i}];
    const Tensor* g = grads.find(ParamId{i});
    for (std::size_t j = 0; j < p.value.size(); ++j) {
      const double gj = g == nullptr ? 0.0 : (*g)[j];
      double& m = p.first_moment[j];
      double& v = p.second_moment[j];
      m = config.beta1 * m + (1.0 - config.beta1) * gj;
      v = config.beta2 * v + (1.0 - config.beta2) * gj * gj;
      const double m_hat = m / correction1;
      const double v_hat = v / correction2;
      p.value[j] -= learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
    }
  }
  params.set_step(params.step() + 1);
}

double clip_grad_norm(GradientBuffer& grads, double max_norm) {
  const double norm = std::sqrt(grads.squared_norm());
  if (max_norm > 0.0 && norm > max_norm) grads.scale(max_norm / norm);
  return norm;
}

}  // namespace glmp::numerics
