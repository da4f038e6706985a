#pragma once

#include <span>
#include <vector>

namespace hemoflow {

enum class BoundaryTreatment { one_sided, periodic };

/// Boundary-extrapolated face values of one scalar field: per cell i,
/// left[i] is the reconstruction at x_{i-1/2}^+ and right[i] at x_{i+1/2}^-.
struct Reconstruction {
  std::vector<double> left, right;

  void resize(std::size_t n) {
    left.resize(n);
    right.resize(n);
  }
};

/// Third-order reconstruction of face values from cell averages.
///
/// Smooth cells use the full three-cell parabola, which reproduces
/// polynomials up to degree 2 exactly on uniform grids. Cells flagged by a
/// curvature-jump detector fall back to nonlinear WENO weights, giving
/// essentially non-oscillatory behavior at discontinuities. Constants are
/// reproduced exactly everywhere, including the one-sided boundary cells.
void weno3_reconstruct(std::span<const double> q, BoundaryTreatment bt,
                       Reconstruction &out);

} // namespace hemoflow
