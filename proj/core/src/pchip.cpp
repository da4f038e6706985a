#include "hemoflow/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "hemoflow/errors.hpp"

namespace hemoflow {

namespace {

double edge_slope(double h0, double h1, double d0, double d1) {
  // Three-point one-sided estimate with the usual monotonicity clamps.
  double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (d * d0 <= 0.0)
    return 0.0;
  if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
    return 3.0 * d0;
  return d;
}

} // namespace

PchipInterpolant::PchipInterpolant(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  if (n < 2 || y_.size() != x_.size())
    throw DomainError("PchipInterpolant: needs >= 2 nodes and matching sizes");
  for (int i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw DomainError("PchipInterpolant: nodes must be strictly increasing");

  d_.assign(n, 0.0);
  if (n == 2) {
    const double s = (y_[1] - y_[0]) / (x_[1] - x_[0]);
    d_[0] = d_[1] = s;
    return;
  }

  std::vector<double> h(n - 1), delta(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    h[i] = x_[i + 1] - x_[i];
    delta[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  for (int i = 1; i < n - 1; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d_[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
  d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

int PchipInterpolant::interval(double x) const {
  const int n = static_cast<int>(x_.size());
  if (x <= x_.front())
    return 0;
  if (x >= x_[n - 2])
    return n - 2;
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  return static_cast<int>(it - x_.begin()) - 1;
}

double PchipInterpolant::operator()(double x) const {
  const int i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
}

double PchipInterpolant::derivative(double x) const {
  const int i = interval(x);
  const double h = x_[i + 1] - x_[i];
  const double s = (x - x_[i]) / h;
  const double s2 = s * s;
  const double dh00 = (6.0 * s2 - 6.0 * s) / h;
  const double dh10 = (3.0 * s2 - 4.0 * s + 1.0) / h;
  const double dh01 = (-6.0 * s2 + 6.0 * s) / h;
  const double dh11 = (3.0 * s2 - 2.0 * s) / h;
  return dh00 * y_[i] + dh10 * h * d_[i] + dh01 * y_[i + 1] + dh11 * h * d_[i + 1];
}

} // namespace hemoflow
