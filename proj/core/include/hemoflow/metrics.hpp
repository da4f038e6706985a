#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hemoflow/errors.hpp"

namespace hemoflow {

/// Percentage relative error curve: pointwise |pred - ref| normalized by
/// the mean magnitude of the reference over the cycle, times 100. The
/// cycle-mean normalization keeps the measure finite through zero
/// crossings of the reference signal.
inline std::vector<double> pre_curve(std::span<const double> pred,
                                     std::span<const double> ref) {
  if (pred.size() != ref.size() || ref.empty())
    throw DomainError("pre_curve: size mismatch");
  double ref_mean = 0.0;
  for (double r : ref)
    ref_mean += std::abs(r);
  ref_mean /= static_cast<double>(ref.size());
  if (!(ref_mean > 0.0))
    throw DomainError("pre_curve: reference is identically zero");
  std::vector<double> out(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i)
    out[i] = 100.0 * std::abs(pred[i] - ref[i]) / ref_mean;
  return out;
}

inline double mean_pre(std::span<const double> pred,
                       std::span<const double> ref) {
  const auto c = pre_curve(pred, ref);
  double s = 0.0;
  for (double v : c)
    s += v;
  return s / static_cast<double>(c.size());
}

} // namespace hemoflow
