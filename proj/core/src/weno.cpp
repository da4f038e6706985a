#include "hemoflow/weno.hpp"

#include <algorithm>
#include <cmath>

#include "hemoflow/errors.hpp"

namespace hemoflow {

namespace {

struct FacePair {
  double left, right;
};

// Optimal three-cell parabola evaluated at the cell faces.
FacePair parabola_faces(double qm, double q0, double qp) {
  return {(2.0 * qm + 5.0 * q0 - qp) / 6.0,
          (-qm + 5.0 * q0 + 2.0 * qp) / 6.0};
}

// Classic nonlinear WENO weights on the two linear sub-stencils.
FacePair weno_js_faces(double qm, double q0, double qp, double eps) {
  const double b_r = (qp - q0) * (qp - q0); // stencil {i, i+1}
  const double b_l = (q0 - qm) * (q0 - qm); // stencil {i-1, i}
  const double ar = 1.0 / ((eps + b_r) * (eps + b_r));
  const double al = 1.0 / ((eps + b_l) * (eps + b_l));

  // Right face: optimal weights 2/3 on {i,i+1}, 1/3 on {i-1,i}.
  {
    const double wr = (2.0 / 3.0) * ar;
    const double wl = (1.0 / 3.0) * al;
    const double s = wr + wl;
    const double pr = 0.5 * (q0 + qp);
    const double pl = 1.5 * q0 - 0.5 * qm;
    const double right = (wr * pr + wl * pl) / s;
    // Left face: optimal weights swap.
    const double wr2 = (1.0 / 3.0) * ar;
    const double wl2 = (2.0 / 3.0) * al;
    const double s2 = wr2 + wl2;
    const double pr2 = 1.5 * q0 - 0.5 * qp;
    const double pl2 = 0.5 * (qm + q0);
    const double left = (wr2 * pr2 + wl2 * pl2) / s2;
    return {left, right};
  }
}

} // namespace

void weno3_reconstruct(std::span<const double> q, BoundaryTreatment bt,
                       Reconstruction &out) {
  const int n = static_cast<int>(q.size());
  if (n < 3)
    throw ConfigError("weno3_reconstruct: at least 3 cells required");
  out.resize(q.size());

  auto wrap = [&](int i) { return ((i % n) + n) % n; };
  auto value = [&](int i) -> double {
    if (bt == BoundaryTreatment::periodic)
      return q[wrap(i)];
    return q[std::clamp(i, 0, n - 1)];
  };

  // Second differences; defined on cells with both neighbors available.
  auto d2 = [&](int i) { return value(i + 1) - 2.0 * value(i) + value(i - 1); };
  auto d2_valid = [&](int i) {
    return bt == BoundaryTreatment::periodic || (i >= 1 && i <= n - 2);
  };

  for (int i = 0; i < n; ++i) {
    const bool interior =
        bt == BoundaryTreatment::periodic || (i >= 1 && i <= n - 2);
    if (!interior) {
      // One-sided linear extrapolation at the outermost cells.
      if (i == 0) {
        out.right[i] = 0.5 * (q[0] + q[1]);
        out.left[i] = 1.5 * q[0] - 0.5 * q[1];
      } else {
        out.left[i] = 0.5 * (q[n - 2] + q[n - 1]);
        out.right[i] = 1.5 * q[n - 1] - 0.5 * q[n - 2];
      }
      continue;
    }

    const double qm = value(i - 1), q0 = value(i), qp = value(i + 1);
    const double scale =
        std::max({std::abs(qm), std::abs(q0), std::abs(qp), 1e-30});

    // Curvature-jump trouble detector: d2 is constant for any quadratic,
    // so smooth cells keep the exact parabola and only cells whose local
    // curvature differs sharply from the neighbors switch to WENO weights.
    double d2c = d2(i);
    double d2min = d2c, d2max = d2c;
    int have = 1;
    for (int off : {-1, 1}) {
      if (d2_valid(i + off)) {
        const double v = d2(i + off);
        d2min = std::min(d2min, v);
        d2max = std::max(d2max, v);
        ++have;
      }
    }
    const double spread = d2max - d2min;
    const double mag = std::max(std::abs(d2min), std::abs(d2max));
    const bool troubled =
        have < 2 || spread > 0.5 * mag + 1e-12 * scale;

    if (!troubled) {
      const FacePair f = parabola_faces(qm, q0, qp);
      out.left[i] = f.left;
      out.right[i] = f.right;
    } else {
      const double eps = 1e-12 * std::max(1.0, scale * scale);
      const FacePair f = weno_js_faces(qm, q0, qp, eps);
      out.left[i] = f.left;
      out.right[i] = f.right;
    }
  }
}

} // namespace hemoflow
