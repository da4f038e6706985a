#pragma once

#include "hemoflow/grid.hpp"

namespace hemoflow {

/// Conservative flux f(Q) = (Au, Au^2, 0).
inline Vec3 physical_flux(const Vec3 &Q) {
  const double u = Q[1] / Q[0];
  return {Q[1], Q[1] * u, 0.0};
}

/// Nonconservative product B(Q) v with
/// B = [[0,0,0],[0,0,A/rho],[0,E0 G(A),0]].
inline Vec3 nonconservative_product(const Vec3 &Q, const Vec3 &v,
                                    const SystemCoeffs &c) {
  return {0.0, Q[0] / c.rho * v[2], c.E0 * c.G(Q[0]) * v[1]};
}

/// Eigenvalues of the extended Jacobian J = df/dQ + B: (u - c, 0, u + c).
Vec3 eigenvalues(const Vec3 &Q, const SystemCoeffs &c);

/// |J(Q)| v computed from the closed-form eigendecomposition
/// |J| = R |Lambda| R^{-1}. Throws SolverError when the eigensystem is
/// degenerate (sonic state or collapsed vessel).
Vec3 abs_jacobian_product(const Vec3 &Q, const Vec3 &v, const SystemCoeffs &c);

/// Numerical flux and nonconservative jump terms of one interface Riemann
/// problem, evaluated with the path-conservative Osher-type (DOT) solver
/// along the straight-line path between the face states.
struct InterfaceTerms {
  Vec3 flux;       ///< 1/2 (f(QL)+f(QR)) - 1/2 int |J(Psi)| dPsi
  Vec3 bjump_half; ///< 1/2 int B(Psi) dPsi, assigned to each adjacent cell
  double max_speed = 0.0; ///< largest |eigenvalue| seen on the path
};

InterfaceTerms dot_flux(const Vec3 &QL, const Vec3 &QR, const SystemCoeffs &c,
                        int quadrature_points = 3);

} // namespace hemoflow
