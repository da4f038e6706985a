#pragma once

#include <cmath>
#include <numbers>

#include "hemoflow/errors.hpp"

namespace hemoflow {

enum class VesselKind { artery, vein };

/// Viscoelastic wall description (standard linear solid) together with the
/// tube-law shape coefficients for one axial station.
///
/// The shape coefficients follow the artery/vein case table:
///   artery: W = R0/h0,        m = 1/2, n = 0
///   vein:   W = 12 R0^3/h0^3, m = 10,  n = -3/2
struct WallModel {
  VesselKind kind = VesselKind::artery;
  double E0 = 0.0;    ///< instantaneous Young modulus [Pa]
  double E_inf = 0.0; ///< asymptotic Young modulus [Pa]
  double eta = 0.0;   ///< wall viscosity [Pa s]
  double tau_r = 0.0; ///< relaxation time [s]
  double W = 0.0;     ///< tube-law geometry coefficient (dimensionless)
  double m = 0.5;     ///< tube-law exponent
  double n = 0.0;     ///< tube-law exponent
  double rho = 1060.0; ///< blood density [kg/m^3]

  static double shape_W(VesselKind kind, double R0, double h0) {
    return kind == VesselKind::artery ? R0 / h0
                                      : 12.0 * R0 * R0 * R0 / (h0 * h0 * h0);
  }
  static double shape_m(VesselKind kind) {
    return kind == VesselKind::artery ? 0.5 : 10.0;
  }
  static double shape_n(VesselKind kind) {
    return kind == VesselKind::artery ? 0.0 : -1.5;
  }

  static WallModel make(VesselKind kind, double E0, double E_inf, double eta,
                        double rho, double R0, double h0) {
    WallModel w;
    w.kind = kind;
    w.E0 = E0;
    w.E_inf = E_inf;
    w.eta = eta;
    w.rho = rho;
    w.W = shape_W(kind, R0, h0);
    w.m = shape_m(kind);
    w.n = shape_n(kind);
    if (E0 > E_inf && E0 > 0.0)
      w.tau_r = eta * (E0 - E_inf) / (E0 * E0);
    w.validate();
    return w;
  }

  /// Copy with the geometry coefficient re-evaluated at a new local radius.
  WallModel at_radius(double R0, double h0) const {
    WallModel w = *this;
    w.W = shape_W(kind, R0, h0);
    return w;
  }

  void validate() const {
    if (!(E0 > 0.0) || !(E_inf > 0.0) || !(E0 > E_inf))
      throw DomainError("WallModel: requires E0 > E_inf > 0");
    if (eta < 0.0 || tau_r < 0.0)
      throw DomainError("WallModel: eta and tau_r must be nonnegative");
    if (!(rho > 0.0))
      throw DomainError("WallModel: rho must be positive");
    if (!(W > 0.0))
      throw DomainError("WallModel: geometry coefficient W must be positive");
  }
};

/// Tapered vessel segment with a linear radius profile.
struct VesselGeometry {
  double L0 = 0.0;     ///< segment length [m]
  double R0_in = 0.0;  ///< inlet equilibrium radius [m]
  double R0_out = 0.0; ///< outlet equilibrium radius [m]
  double h0 = 0.0;     ///< wall thickness [m]
  double p0 = 0.0;     ///< equilibrium (diastolic) pressure [Pa]
  double p_out = 0.0;  ///< outflow/external pressure [Pa]

  void validate() const {
    if (!(L0 > 0.0) || !(h0 > 0.0) || !(R0_in > 0.0) || !(R0_out > 0.0))
      throw DomainError("VesselGeometry: L0, h0 and radii must be positive");
  }

  double radius(double x) const {
    return R0_in + (R0_out - R0_in) * (x / L0);
  }
  double area0(double x) const {
    const double r = radius(x);
    return std::numbers::pi * r * r;
  }
  double mean_radius() const { return 0.5 * (R0_in + R0_out); }
  double pressure0(double /*x*/) const { return p0; }
};

/// Elastic tube-law slope G(A) = (m a^m - n a^n) / (W A), a = A/A0.
/// Multiplied by the Young modulus this is the wall stiffness term of the
/// pressure equation.
inline double tube_law_G(double A, double A0, const WallModel &wall) {
  if (!(A > 0.0) || !(A0 > 0.0))
    throw DomainError("tube_law_G: requires A > 0 and A0 > 0");
  const double a = A / A0;
  return (wall.m * std::pow(a, wall.m) - wall.n * std::pow(a, wall.n)) /
         (wall.W * A);
}

/// Derivative of G with respect to A at fixed A0.
inline double tube_law_dG_dA(double A, double A0, const WallModel &wall) {
  if (!(A > 0.0) || !(A0 > 0.0))
    throw DomainError("tube_law_dG_dA: requires A > 0 and A0 > 0");
  const double a = A / A0;
  const double num = wall.m * std::pow(a, wall.m) - wall.n * std::pow(a, wall.n);
  const double dnum =
      (wall.m * wall.m * std::pow(a, wall.m - 1.0) -
       wall.n * wall.n * std::pow(a, wall.n - 1.0)) / A0;
  return dnum / (wall.W * A) - num / (wall.W * A * A);
}

/// Relaxed (asymptotic) transmural pressure F(A) = p0 + E_inf/W (a^m - a^n).
inline double tube_law_F(double A, double A0, double p0, const WallModel &wall) {
  if (!(A > 0.0) || !(A0 > 0.0))
    throw DomainError("tube_law_F: requires A > 0 and A0 > 0");
  const double a = A / A0;
  return p0 + wall.E_inf / wall.W * (std::pow(a, wall.m) - std::pow(a, wall.n));
}

/// dF/dA = E_inf G(A): the elastic tube law and the stiffness term share
/// the same slope function.
inline double tube_law_dF_dA(double A, double A0, const WallModel &wall) {
  return wall.E_inf * tube_law_G(A, A0, wall);
}

/// Wave speed c = sqrt(A E0 G(A) / rho).
inline double wave_speed(double A, double A0, const WallModel &wall) {
  const double radicand = A * wall.E0 * tube_law_G(A, A0, wall) / wall.rho;
  if (radicand < 0.0)
    throw DomainError("wave_speed: negative radicand (collapsed vessel state)");
  return std::sqrt(radicand);
}

/// Stress-relaxation modulus E(t) = E0 e^{-t/tau} + E_inf (1 - e^{-t/tau}).
/// For tau_r = 0 the pointwise limit is returned: E0 at t = 0, E_inf for
/// t > 0 (the jump is a property of the limit, not an error).
inline double relaxation_modulus(double t, const WallModel &wall) {
  if (t < 0.0)
    throw DomainError("relaxation_modulus: requires t >= 0");
  if (wall.tau_r == 0.0)
    return t == 0.0 ? wall.E0 : wall.E_inf;
  const double decay = std::exp(-t / wall.tau_r);
  return wall.E0 * decay + wall.E_inf * (1.0 - decay);
}

/// SLS relaxation time tau_r = eta (E0 - E_inf) / E0^2.
inline double calibrate_tau_r(double eta, double E0, double E_inf) {
  if (!(E0 > E_inf) || !(E_inf > 0.0))
    throw DomainError("calibrate_tau_r: requires E0 > E_inf > 0");
  if (eta < 0.0)
    throw DomainError("calibrate_tau_r: requires eta >= 0");
  return eta * (E0 - E_inf) / (E0 * E0);
}

/// Inverse of calibrate_tau_r: the viscosity that produces a given tau_r.
inline double viscosity_from_tau_r(double tau_r, double E0, double E_inf) {
  if (!(E0 > E_inf) || !(E_inf > 0.0))
    throw DomainError("viscosity_from_tau_r: requires E0 > E_inf > 0");
  return tau_r * E0 * E0 / (E0 - E_inf);
}

/// Asymptotic Young modulus from a reference wave speed at the equilibrium
/// state, using the mean equilibrium radius of the (possibly tapered)
/// segment:
///   artery: E_inf = 2 R0 rho c^2 / h0
///   vein:   E_inf = 24 R0^3 rho c^2 / (23 h0^3)
inline double calibrate_E_inf(const VesselGeometry &geom, double rho,
                              double c_ref, VesselKind kind) {
  geom.validate();
  if (!(c_ref > 0.0) || !(rho > 0.0))
    throw DomainError("calibrate_E_inf: requires c_ref > 0 and rho > 0");
  const double R0 = geom.mean_radius();
  if (kind == VesselKind::artery)
    return 2.0 * R0 * rho * c_ref * c_ref / geom.h0;
  return 24.0 * R0 * R0 * R0 * rho * c_ref * c_ref /
         (23.0 * geom.h0 * geom.h0 * geom.h0);
}

/// Characteristic scales used to write the model in dimensionless form.
/// T_c = L_c/U_c and P_c = rho U_c^2 by construction.
struct NonDimScales {
  double L_c = 1.0; ///< length scale [m]
  double A_c = 1.0; ///< area scale [m^2]
  double U_c = 1.0; ///< velocity scale [m/s]
  double T_c = 1.0; ///< time scale [s]
  double P_c = 1.0; ///< pressure scale [Pa]

  static NonDimScales make(double L0, double A_ref, double rho,
                           double U_c = 1.0) {
    if (!(L0 > 0.0) || !(A_ref > 0.0) || !(rho > 0.0) || !(U_c > 0.0))
      throw DomainError("NonDimScales: all scales must be positive");
    NonDimScales s;
    s.L_c = L0;
    s.A_c = A_ref;
    s.U_c = U_c;
    s.T_c = L0 / U_c;
    s.P_c = rho * U_c * U_c;
    return s;
  }

  void validate() const {
    if (!(L_c > 0.0 && A_c > 0.0 && U_c > 0.0 && T_c > 0.0 && P_c > 0.0))
      throw DomainError("NonDimScales: all scales must be positive");
  }

  double x_hat(double x) const { return x / L_c; }
  double t_hat(double t) const { return t / T_c; }
  double A_hat(double A) const { return A / A_c; }
  double u_hat(double u) const { return u / U_c; }
  double p_hat(double p) const { return p / P_c; }

  double x_dim(double xh) const { return xh * L_c; }
  double t_dim(double th) const { return th * T_c; }
  double A_dim(double Ah) const { return Ah * A_c; }
  double u_dim(double uh) const { return uh * U_c; }
  double p_dim(double ph) const { return ph * P_c; }
};

} // namespace hemoflow
