#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "biset/ops.hpp"
#include "biset/tensor.hpp"

namespace biset {

/// Verifies reverse-mode gradients against central finite differences.
///
/// `f` must be a deterministic function from the given inputs to a scalar
/// tensor, rebuilding its graph on every call. Returns the maximum over all
/// input coordinates of |analytic - numeric| / max(1e-8, |analytic| +
/// |numeric|). Throws NumericError naming the offending coordinate when
/// either side is non-finite.
template <typename F>
double grad_check(F&& f, std::span<Tensor> inputs, double eps) {
  if (!(eps > 0)) throw ConfigError("grad_check: eps must be positive");
  for (Tensor& t : inputs) t.zero_grad();
  Tensor loss = f(inputs);
  require_shape(loss.size() == 1, "grad_check: f must produce a scalar");
  backward(loss);

  std::vector<Mat> analytic;
  analytic.reserve(inputs.size());
  for (const Tensor& t : inputs) analytic.push_back(t.grad());

  double worst = 0.0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    Mat& v = inputs[i].value();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double orig = v(r, c);
        v(r, c) = orig + eps;
        const double up = f(inputs).item();
        v(r, c) = orig - eps;
        const double down = f(inputs).item();
        v(r, c) = orig;
        const double numeric = (up - down) / (2.0 * eps);
        const double exact = analytic[i](r, c);
        if (!std::isfinite(numeric) || !std::isfinite(exact)) {
          throw NumericError("grad_check: non-finite derivative at input " +
                             std::to_string(i) + " coordinate (" +
                             std::to_string(r) + "," + std::to_string(c) +
                             ")");
        }
        const double rel = std::abs(exact - numeric) /
                           std::max(1e-8, std::abs(exact) + std::abs(numeric));
        worst = std::max(worst, rel);
      }
    }
  }
  return worst;
}

}  // namespace biset
