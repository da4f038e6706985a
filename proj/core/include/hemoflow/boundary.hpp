#pragma once

#include <filesystem>
#include <vector>

#include "hemoflow/grid.hpp"
#include "hemoflow/pchip.hpp"

namespace hemoflow {

/// Periodic inlet flow-rate forcing Q(t) [m^3/s], either tabulated over one
/// period (monotone-cubic interpolation, periodic extension) or a truncated
/// Fourier series.
class InflowProfile {
public:
  static InflowProfile tabulated(std::vector<double> t, std::vector<double> Q,
                                 double period);
  /// Q(t) = a0 + sum_k a_k cos(2 pi k t/T) + b_k sin(2 pi k t/T).
  static InflowProfile fourier(double period, double a0, std::vector<double> a,
                               std::vector<double> b);
  /// Reads a two-column `t,Q` CSV (header required) covering one period.
  static InflowProfile from_csv(const std::filesystem::path &path);

  double flow(double t) const;
  double period() const { return period_; }

private:
  void check_wrap() const;

  bool tabulated_ = false;
  double period_ = 0.0;
  double t0_ = 0.0;
  PchipInterpolant interp_;
  double a0_ = 0.0;
  std::vector<double> a_, b_;
};

/// Three-element Windkessel with internal distal-pressure state p_c.
struct WindkesselRCR {
  double R1 = 0.0;    ///< proximal resistance [Pa s/m^3]
  double R2 = 0.0;    ///< distal resistance [Pa s/m^3]
  double C = 0.0;     ///< compliance [m^3/Pa]
  double p_out = 0.0; ///< venous/outflow pressure [Pa]
  double p_c = 0.0;   ///< distal (compliance) pressure [Pa]

  void validate() const {
    if (!(R1 > 0.0) || !(R2 > 0.0) || !(C > 0.0))
      throw DomainError("WindkesselRCR: R1, R2, C must be positive");
  }

  /// Implicit-Euler advance of C dp_c/dt = Q - (p_c - p_out)/R2 for a
  /// given flow; returns the new p_c without committing it.
  double advanced_pc(double Q, double dt) const {
    const double f = dt / C;
    return (p_c + f * (Q + p_out / R2)) / (1.0 + f / R2);
  }
};

/// Resolved interface state produced by a boundary coupling solve.
struct BoundaryState {
  double A = 0.0;
  double u = 0.0;
  double p = 0.0;
  double Q() const { return A * u; }
  Vec3 conserved() const { return {A, A * u, p}; }
};

/// Riemann invariant I(A) = int c(a)/a da of the frozen-coefficient system,
/// measured from the equilibrium area (alpha = 1).
double riemann_invariant_integral(double A, const SystemCoeffs &c);

/// Inlet coupling: enforces A u = Q_t at the interface while transporting
/// the outgoing (u - c) characteristic from the first interior cell state.
/// The interface pressure follows the frozen instantaneous-stiffness path
/// from the interior state.
BoundaryState inflow_boundary(const Vec3 &Q_interior, const SystemCoeffs &c,
                              double Q_t);

/// Outlet coupling: the interface state satisfies the outgoing (u + c)
/// characteristic from the last interior cell and the RCR relation
/// p* = p_c' + R1 Q*, with p_c' the implicit-Euler advance of the
/// compliance pressure over dt. Returns the state and the advanced p_c
/// (not committed to wk).
struct OutletSolution {
  BoundaryState state;
  double p_c_new = 0.0;
};
OutletSolution windkessel_boundary(const Vec3 &Q_interior,
                                   const SystemCoeffs &c,
                                   const WindkesselRCR &wk, double dt);

} // namespace hemoflow
