#pragma once

#include <vector>

namespace hemoflow {

/// Monotone cubic Hermite interpolant (Fritsch-Carlson slopes).
/// Shape-preserving: never overshoots the data range, reproduces linear
/// data exactly, and passes through every node.
class PchipInterpolant {
public:
  PchipInterpolant() = default;
  PchipInterpolant(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  const std::vector<double> &nodes() const { return x_; }
  const std::vector<double> &values() const { return y_; }

private:
  int interval(double x) const;

  std::vector<double> x_, y_, d_;
};

} // namespace hemoflow
