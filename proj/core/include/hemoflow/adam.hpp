#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hemoflow/errors.hpp"

namespace hemoflow {

/// Adam optimizer state with bias correction.
struct AdamState {
  std::vector<double> m, v;
  long k = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}

  void resize(std::size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    k = 0;
  }

  void step(double lr, std::span<double> params,
            std::span<const double> grad) {
    if (params.size() != m.size() || grad.size() != m.size())
      throw TrainError("adam_step: shape mismatch");
    for (double g : grad)
      if (!std::isfinite(g))
        throw TrainError("adam_step: non-finite gradient, step rejected");
    ++k;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(k));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(k));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
  }
};

} // namespace hemoflow
