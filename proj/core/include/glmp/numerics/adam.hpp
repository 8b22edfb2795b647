// Copyright 2026 The GLMP Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "glmp/numerics/params.hpp"

namespace glmp::numerics {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// One bias-corrected Adam update over every parameter in `params`.
// Parameters absent from `grads` are treated as having zero gradient.
// Throws TrainingError naming the first parameter with a non-finite gradient;
// in that case nothing is modified.
void adam_step(ParamStore& params, const GradientBuffer& grads, double learning_rate,
               const AdamConfig& config = {});

// Rescales `grads` so that its global L2 norm is at most `max_norm`. Returns the norm before clipping.
double clip_grad_norm(GradientBuffer& grads, double max_norm);

}  // namespace glmp::numerics
