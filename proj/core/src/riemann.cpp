#include "hemoflow/riemann.hpp"

#include <cmath>

#include "hemoflow/errors.hpp"

namespace hemoflow {

namespace {

// Gauss-Legendre nodes/weights on [0, 1].
struct QuadRule {
  std::vector<double> s, w;
};

QuadRule gauss_rule(int n) {
  QuadRule r;
  switch (n) {
  case 1:
    r.s = {0.5};
    r.w = {1.0};
    return r;
  case 2: {
    const double a = 0.5 / std::sqrt(3.0);
    r.s = {0.5 - a, 0.5 + a};
    r.w = {0.5, 0.5};
    return r;
  }
  case 3: {
    const double a = 0.5 * std::sqrt(3.0 / 5.0);
    r.s = {0.5 - a, 0.5, 0.5 + a};
    r.w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }
  default: {
    // Composite of the 3-point rule; plenty for oracle-grade quadrature.
    const int blocks = (n + 2) / 3;
    const QuadRule base = gauss_rule(3);
    for (int b = 0; b < blocks; ++b)
      for (int k = 0; k < 3; ++k) {
        r.s.push_back((b + base.s[k]) / blocks);
        r.w.push_back(base.w[k] / blocks);
      }
    return r;
  }
  }
}

} // namespace

Vec3 eigenvalues(const Vec3 &Q, const SystemCoeffs &c) {
  if (!(Q[0] > 0.0))
    throw SolverError("eigenvalues: non-positive area");
  const double u = Q[1] / Q[0];
  const double cs = c.wave_speed(Q[0]);
  if (!std::isfinite(cs))
    throw SolverError("eigenvalues: non-finite wave speed");
  return {u - cs, 0.0, u + cs};
}

Vec3 abs_jacobian_product(const Vec3 &Q, const Vec3 &v,
                          const SystemCoeffs &c) {
  const double A = Q[0];
  if (!(A > 0.0))
    throw SolverError("abs_jacobian_product: non-positive area");
  const double u = Q[1] / A;
  const double G = c.G(A);
  const double EG = c.E0 * G;
  const double cs2 = A * EG / c.rho;
  if (!(cs2 > 0.0))
    throw SolverError("abs_jacobian_product: hyperbolicity loss (c^2 <= 0)");
  const double cs = std::sqrt(cs2);

  // Right eigenvectors (columns): r1=(1, u-c, EG), r2=(1, 0, rho u^2/A),
  // r3=(1, u+c, EG); det R = 2 c rho (c^2 - u^2) / A.
  const double ru = c.rho * u * u / A;
  const double det = 2.0 * cs * (EG - ru);
  const double scale = std::abs(EG) + std::abs(ru) + 1e-300;
  if (std::abs(det) < 1e-12 * cs * scale)
    throw SolverError(
        "abs_jacobian_product: degenerate eigensystem (sonic state)");

  const double l1 = std::abs(u - cs), l2 = 0.0, l3 = std::abs(u + cs);

  // Solve R y = v by Cramer's rule, then return R |Lambda| y.
  const double r11 = 1.0, r12 = 1.0, r13 = 1.0;
  const double r21 = u - cs, r22 = 0.0, r23 = u + cs;
  const double r31 = EG, r32 = ru, r33 = EG;

  auto det3 = [](double a11, double a12, double a13, double a21, double a22,
                 double a23, double a31, double a32, double a33) {
    return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
           a13 * (a21 * a32 - a22 * a31);
  };
  const double y1 =
      det3(v[0], r12, r13, v[1], r22, r23, v[2], r32, r33) / det;
  const double y2 =
      det3(r11, v[0], r13, r21, v[1], r23, r31, v[2], r33) / det;
  const double y3 =
      det3(r11, r12, v[0], r21, r22, v[1], r31, r32, v[2]) / det;

  const double z1 = l1 * y1, z2 = l2 * y2, z3 = l3 * y3;
  return {r11 * z1 + r12 * z2 + r13 * z3, r21 * z1 + r22 * z2 + r23 * z3,
          r31 * z1 + r32 * z2 + r33 * z3};
}

InterfaceTerms dot_flux(const Vec3 &QL, const Vec3 &QR, const SystemCoeffs &c,
                        int quadrature_points) {
  InterfaceTerms out;
  const Vec3 dQ = {QR[0] - QL[0], QR[1] - QL[1], QR[2] - QL[2]};
  const Vec3 fL = physical_flux(QL);
  const Vec3 fR = physical_flux(QR);

  Vec3 diss = {0.0, 0.0, 0.0};
  Vec3 bpath = {0.0, 0.0, 0.0};
  const bool zero_jump =
      dQ[0] == 0.0 && dQ[1] == 0.0 && dQ[2] == 0.0;

  const QuadRule rule = gauss_rule(quadrature_points);
  double max_speed = 0.0;
  for (std::size_t g = 0; g < rule.s.size(); ++g) {
    const double s = rule.s[g];
    const Vec3 Qs = {QL[0] + s * dQ[0], QL[1] + s * dQ[1], QL[2] + s * dQ[2]};
    const Vec3 lam = eigenvalues(Qs, c);
    max_speed = std::max(
        {max_speed, std::abs(lam[0]), std::abs(lam[2])});
    if (zero_jump)
      continue;
    const Vec3 av = abs_jacobian_product(Qs, dQ, c);
    const Vec3 bv = nonconservative_product(Qs, dQ, c);
    for (int k = 0; k < 3; ++k) {
      diss[k] += rule.w[g] * av[k];
      bpath[k] += rule.w[g] * bv[k];
    }
  }

  for (int k = 0; k < 3; ++k) {
    out.flux[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * diss[k];
    out.bjump_half[k] = 0.5 * bpath[k];
  }
  out.max_speed = max_speed;
  return out;
}

} // namespace hemoflow
