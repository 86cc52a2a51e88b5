#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "biset/tensor.hpp"

namespace biset {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second-moment accumulators for one parameter set, plus the shared
/// step counter. Slots are allocated lazily to match parameter shapes.
struct AdamState {
  std::vector<Mat> m;
  std::vector<Mat> v;
  std::int64_t step = 0;
  AdamConfig config;
};

inline void zero_grads(std::span<Tensor> params) {
  for (Tensor& p : params) p.zero_grad();
}

/// One optimizer step: clips each gradient component into [clip_lo, clip_hi],
/// adds the L2 decay term weight_decay * param, then applies bias-corrected
/// Adam. Gradients are left untouched; call zero_grads before the next
/// accumulation.
inline void clip_and_adam_step(std::span<Tensor> params, AdamState& state,
                               double lr, double weight_decay = 0.0,
                               double clip_lo = -5.0, double clip_hi = 5.0) {
  if (!(lr > 0)) throw ConfigError("adam: learning rate must be positive");
  if (state.m.size() != params.size()) {
    state.m.clear();
    state.v.clear();
    for (const Tensor& p : params) {
      state.m.push_back(Mat::Zero(p.rows(), p.cols()));
      state.v.push_back(Mat::Zero(p.rows(), p.cols()));
    }
    state.step = 0;
  }
  state.step += 1;
  const AdamConfig& c = state.config;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& p = params[i];
    Mat g = p.grad().cwiseMax(clip_lo).cwiseMin(clip_hi);
    if (weight_decay != 0.0) g += weight_decay * p.value();
    state.m[i] = c.beta1 * state.m[i] + (1.0 - c.beta1) * g;
    state.v[i] = c.beta2 * state.v[i] + (1.0 - c.beta2) * g.cwiseProduct(g);
    Mat m_hat = state.m[i] / bc1;
    Mat v_hat = state.v[i] / bc2;
    p.value().array() -=
        lr * m_hat.array() / (v_hat.array().sqrt() + c.eps);
  }
}

/// Fast Rerank schedule: initial rate multiplied by 0.1 every 10K steps.
inline double rerank_lr(double base, std::int64_t step,
                        std::int64_t decay_every = 10000,
                        double factor = 0.1) {
  return base * std::pow(factor, static_cast<double>(step / decay_every));
}

/// Summarizer schedule: constant for the first 50K steps, halved every 10K
/// steps afterwards.
inline double biset_lr(double base, std::int64_t step,
                       std::int64_t flat_steps = 50000,
                       std::int64_t halve_every = 10000) {
  if (step < flat_steps) return base;
  return base * std::pow(0.5, static_cast<double>(
                                  (step - flat_steps) / halve_every + 1));
}

}  // namespace biset
