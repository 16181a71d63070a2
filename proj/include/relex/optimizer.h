#pragma once

#include "relex/params.h"

namespace relex {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double l2 = 0.0;  // applied to weight-flagged parameters only
};

// Global L2 norm of gradients over the selected groups.
double grad_norm(const ParamStore& store, unsigned groups = kAllGroups);

// Global-norm clipping: if the norm exceeds threshold, scale all selected
// gradients by threshold / norm.
void clip_gradients(ParamStore& store, double threshold, unsigned groups = kAllGroups);

// One Adam update with bias correction over the selected groups. The L2 term
// l2 * value is added to the gradient of weight-flagged parameters before the
// moment updates. Each touched parameter's step counter advances by one.
void adam_step(ParamStore& store, const AdamConfig& cfg, unsigned groups = kAllGroups);

// Running mean of parameter snapshots: avg += (value - avg) / n.
void update_average(ParamStore& store);

// Swap current values with the averaged copy (and back). Inference uses the
// averaged parameters; training code wraps evaluation in swap pairs.
void swap_with_average(ParamStore& store);

// Overwrite values with the averaged copy (end of training). A store that was
// never averaged is left unchanged.
void finalize_to_average(ParamStore& store);

}  // namespace relex
