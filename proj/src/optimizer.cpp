#include "relex/optimizer.h"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace relex {

double grad_norm(const ParamStore& store, unsigned groups) {
  double sq = 0.0;
  for (const auto& p : store.all()) {
    if (!(p->group & groups)) continue;
    for (double g : p->grad.data) sq += g * g;
  }
  return std::sqrt(sq);
}

void clip_gradients(ParamStore& store, double threshold, unsigned groups) {
  if (threshold <= 0.0) throw std::invalid_argument("clip_gradients: threshold must be > 0");
  double norm = grad_norm(store, groups);
  if (norm <= threshold) return;
  double s = threshold / norm;
  for (const auto& p : store.all()) {
    if (!(p->group & groups)) continue;
    for (double& g : p->grad.data) g *= s;
  }
}

void adam_step(ParamStore& store, const AdamConfig& cfg, unsigned groups) {
  for (const auto& p : store.all()) {
    if (!(p->group & groups)) continue;
    p->adam_t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(p->adam_t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(p->adam_t));
    const int n = p->value.size();
    for (int j = 0; j < n; ++j) {
      double g = p->grad[j];
      if (p->weight && cfg.l2 != 0.0) g += cfg.l2 * p->value[j];
      p->m[j] = cfg.beta1 * p->m[j] + (1.0 - cfg.beta1) * g;
      p->v[j] = cfg.beta2 * p->v[j] + (1.0 - cfg.beta2) * g * g;
      const double mhat = p->m[j] / bc1;
      const double vhat = p->v[j] / bc2;
      p->value[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
  }
}

void update_average(ParamStore& store) {
  store.avg_count += 1;
  const double inv_n = 1.0 / static_cast<double>(store.avg_count);
  for (const auto& p : store.all()) {
    const int n = p->value.size();
    for (int j = 0; j < n; ++j) {
      p->avg[j] += (p->value[j] - p->avg[j]) * inv_n;
    }
  }
}

void swap_with_average(ParamStore& store) {
  if (store.avg_count == 0) return;
  for (const auto& p : store.all()) std::swap(p->value.data, p->avg.data);
}

void finalize_to_average(ParamStore& store) {
  if (store.avg_count == 0) return;
  for (const auto& p : store.all()) p->value.data = p->avg.data;
}

}  // namespace relex
