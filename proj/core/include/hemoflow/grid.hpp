#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hemoflow/errors.hpp"
#include "hemoflow/vessel.hpp"

namespace hemoflow {

using Vec3 = std::array<double, 3>;

/// Local coefficients of the quasi-linear system at one axial position.
struct SystemCoeffs {
  double A0 = 0.0;    ///< equilibrium area [m^2]
  double p0 = 0.0;    ///< equilibrium pressure [Pa]
  double W = 0.0;     ///< tube-law geometry coefficient
  double m = 0.5;     ///< tube-law exponent
  double n = 0.0;     ///< tube-law exponent
  double E0 = 0.0;    ///< instantaneous Young modulus [Pa]
  double E_inf = 0.0; ///< asymptotic Young modulus [Pa]
  double rho = 0.0;   ///< blood density [kg/m^3]

  double alpha(double A) const { return A / A0; }
  double G(double A) const {
    const double a = alpha(A);
    return (m * std::pow(a, m) - n * std::pow(a, n)) / (W * A);
  }
  double F(double A) const {
    const double a = alpha(A);
    return p0 + E_inf / W * (std::pow(a, m) - std::pow(a, n));
  }
  double wave_speed(double A) const {
    return std::sqrt(A * E0 * G(A) / rho);
  }
};

/// Uniform 1D finite-volume grid with geometry coefficients sampled at the
/// cell centers, the interfaces, and the in-cell Gauss nodes.
struct Grid1D {
  int n_c = 0;
  double dx = 0.0;
  double L0 = 0.0;
  std::vector<double> xc;                            ///< centers, n_c
  std::vector<SystemCoeffs> cell;                    ///< at centers, n_c
  std::vector<SystemCoeffs> iface;                   ///< at interfaces, n_c+1
  std::vector<std::array<SystemCoeffs, 3>> gauss;    ///< per-cell Gauss nodes

  /// In-cell 3-point Gauss-Legendre rule on xi in [-1/2, 1/2].
  static constexpr std::array<double, 3> gauss_xi = {
      -0.3872983346207417, 0.0, 0.3872983346207417}; // +-sqrt(3/5)/2
  static constexpr std::array<double, 3> gauss_w = {5.0 / 18.0, 8.0 / 18.0,
                                                    5.0 / 18.0};

  static Grid1D make(const VesselGeometry &geom, const WallModel &wall,
                     int n_c);
};

/// Cell-averaged conserved state Q_i = (A_i, (Au)_i, p_i) at one instant.
struct StateField {
  double t = 0.0;
  std::vector<double> A, q, p;

  int size() const { return static_cast<int>(A.size()); }

  static StateField equilibrium(const Grid1D &grid);

  void validate() const {
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (!(A[i] > 0.0))
        throw SolverError("StateField: non-positive area in cell " +
                          std::to_string(i));
      if (!std::isfinite(A[i]) || !std::isfinite(q[i]) || !std::isfinite(p[i]))
        throw SolverError("StateField: non-finite value in cell " +
                          std::to_string(i));
    }
  }
};

inline SystemCoeffs sample_coeffs(const VesselGeometry &geom,
                                  const WallModel &wall, double x) {
  SystemCoeffs c;
  c.A0 = geom.area0(x);
  c.p0 = geom.pressure0(x);
  c.W = WallModel::shape_W(wall.kind, geom.radius(x), geom.h0);
  c.m = wall.m;
  c.n = wall.n;
  c.E0 = wall.E0;
  c.E_inf = wall.E_inf;
  c.rho = wall.rho;
  return c;
}

inline Grid1D Grid1D::make(const VesselGeometry &geom, const WallModel &wall,
                           int n_c) {
  if (n_c < 3)
    throw ConfigError("Grid1D: at least 3 cells required (WENO stencil)");
  geom.validate();
  wall.validate();
  Grid1D g;
  g.n_c = n_c;
  g.L0 = geom.L0;
  g.dx = geom.L0 / n_c;
  g.xc.resize(n_c);
  g.cell.resize(n_c);
  g.iface.resize(n_c + 1);
  g.gauss.resize(n_c);
  for (int i = 0; i < n_c; ++i) {
    g.xc[i] = (i + 0.5) * g.dx;
    g.cell[i] = sample_coeffs(geom, wall, g.xc[i]);
    for (int k = 0; k < 3; ++k)
      g.gauss[i][k] =
          sample_coeffs(geom, wall, g.xc[i] + gauss_xi[k] * g.dx);
  }
  for (int i = 0; i <= n_c; ++i)
    g.iface[i] = sample_coeffs(geom, wall, i * g.dx);
  return g;
}

inline StateField StateField::equilibrium(const Grid1D &grid) {
  StateField s;
  s.t = 0.0;
  s.A.resize(grid.n_c);
  s.q.assign(grid.n_c, 0.0);
  s.p.resize(grid.n_c);
  for (int i = 0; i < grid.n_c; ++i) {
    s.A[i] = grid.cell[i].A0;
    s.p[i] = grid.cell[i].p0;
  }
  return s;
}

} // namespace hemoflow
