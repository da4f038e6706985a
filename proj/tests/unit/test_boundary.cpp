#include <doctest.h>

#include <cmath>

#include "hemoflow/boundary.hpp"
#include "hemoflow/solver.hpp"

using namespace hemoflow;

namespace {

SystemCoeffs ta_coeffs() {
  SystemCoeffs c;
  c.A0 = 4.9e-4;
  c.p0 = 9467.0;
  c.W = 12.5;
  c.m = 0.5;
  c.n = 0.0;
  c.E0 = 0.727e6;
  c.E_inf = 0.533e6;
  c.rho = 1060.0;
  return c;
}

} // namespace

TEST_CASE("inflow boundary: zero flow at equilibrium returns rest state") {
  SystemCoeffs c = ta_coeffs();
  const Vec3 interior = {c.A0, 0.0, c.p0};
  const BoundaryState b = inflow_boundary(interior, c, 0.0);
  CHECK(b.u == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(b.A == doctest::Approx(c.A0).epsilon(1e-12));
  CHECK(b.p == doctest::Approx(c.p0).epsilon(1e-10));
  const Vec3 f = physical_flux(b.conserved());
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(0.0));
  CHECK(f[2] == 0.0);
}

TEST_CASE("inflow boundary enforces the prescribed flow exactly") {
  SystemCoeffs c = ta_coeffs();
  const Vec3 interior = {1.02 * c.A0, 0.3 * c.A0, 1.05 * c.p0};
  for (double Q : {1e-5, 5e-5, 2e-4, -3e-5}) {
    const BoundaryState b = inflow_boundary(interior, c, Q);
    CHECK(b.A * b.u == doctest::Approx(Q).epsilon(1e-12));
    // outgoing characteristic preserved
    const double J_int =
        interior[1] / interior[0] -
        riemann_invariant_integral(interior[0], c);
    const double J_b = b.u - riemann_invariant_integral(b.A, c);
    CHECK(J_b == doctest::Approx(J_int).epsilon(1e-9));
  }
}

TEST_CASE("inflow boundary diverges cleanly on absurd inflow") {
  SystemCoeffs c = ta_coeffs();
  const Vec3 interior = {c.A0, 0.0, c.p0};
  CHECK_THROWS_AS(inflow_boundary(interior, c, 1e3), SolverError);
}

TEST_CASE("riemann invariant integral: artery closed form is 4c") {
  SystemCoeffs c = ta_coeffs();
  // I(A) = (2/m)(c(A) - c(A0)) with m = 1/2
  for (double alpha : {0.8, 0.95, 1.0, 1.1, 1.4}) {
    const double A = alpha * c.A0;
    const double expect = 4.0 * (c.wave_speed(A) - c.wave_speed(c.A0));
    CHECK(riemann_invariant_integral(A, c) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  // vein branch uses quadrature; compare against a fine trapezoid
  SystemCoeffs v = c;
  v.m = 10.0;
  v.n = -1.5;
  v.W = 12.0 * 8.0;
  const double A = 1.25 * v.A0;
  double acc = 0.0;
  const int N = 20000;
  for (int k = 0; k < N; ++k) {
    const double a1 = 1.0 + (0.25 * k) / N;
    const double a2 = 1.0 + (0.25 * (k + 1)) / N;
    auto f = [&](double a) {
      return std::sqrt(v.E0 *
                       (v.m * std::pow(a, v.m) - v.n * std::pow(a, v.n)) /
                       (v.rho * v.W)) /
             a;
    };
    acc += 0.5 * (f(a1) + f(a2)) * (a2 - a1);
  }
  CHECK(riemann_invariant_integral(A, v) == doctest::Approx(acc).epsilon(1e-8));
}

TEST_CASE("windkessel: zero flow with p_c = p_out is a fixed point") {
  WindkesselRCR wk{18.503e6, 104.920e6, 10.163e-9, 0.0, 0.0};
  CHECK(wk.advanced_pc(0.0, 1e-3) == doctest::Approx(0.0).epsilon(1e-15));
  WindkesselRCR wk2 = wk;
  wk2.p_out = 500.0;
  wk2.p_c = 500.0;
  CHECK(wk2.advanced_pc(0.0, 1e-3) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("windkessel charging curve matches the RC exponential") {
  // Table-1 RCR values; constant flow step of 5e-5 m^3/s.
  const double R1 = 18.503e6, R2 = 104.920e6, C = 10.163e-9;
  const double tau_rc = R2 * C;
  CHECK(tau_rc == doctest::Approx(1.0663019600e0).epsilon(1e-9));
  const double Q = 5e-5;
  for (double dt : {1e-3, 2.5e-4}) {
    WindkesselRCR wk{R1, R2, C, 0.0, 0.0};
    double t = 0.0;
    double max_rel = 0.0;
    while (t < 2.0) {
      wk.p_c = wk.advanced_pc(Q, dt);
      t += dt;
      const double exact = R2 * Q * (1.0 - std::exp(-t / tau_rc));
      max_rel = std::max(max_rel, std::abs(wk.p_c - exact) / (R2 * Q));
    }
    if (dt <= 2.5e-4)
      CHECK(max_rel < 0.01);
  }
}

TEST_CASE("windkessel boundary solve couples characteristic and RCR") {
  SystemCoeffs c = ta_coeffs();
  WindkesselRCR wk{18.503e6, 104.920e6, 10.163e-9, 0.0, 9467.0};
  const Vec3 interior = {1.01 * c.A0, 0.2 * c.A0, 1.02 * c.p0};
  const OutletSolution sol = windkessel_boundary(interior, c, wk, 1e-3);
  // characteristic relation
  const double Jp = interior[1] / interior[0] +
                    riemann_invariant_integral(interior[0], c);
  CHECK(sol.state.u + riemann_invariant_integral(sol.state.A, c) ==
        doctest::Approx(Jp).epsilon(1e-10));
  // RCR relation with the implicitly advanced compliance pressure
  CHECK(sol.state.p ==
        doctest::Approx(sol.p_c_new + wk.R1 * sol.state.Q()).epsilon(1e-10));
}

TEST_CASE("coupled steady state approaches p_out + (R1+R2) Q") {
  VesselGeometry g{.L0 = 0.24137, .R0_in = 0.0125, .R0_out = 0.0125,
                   .h0 = 1e-3, .p0 = 9467.0, .p_out = 0.0};
  WallModel w = WallModel::make(VesselKind::artery, 0.727e6, 0.533e6, 23884.0,
                                1060.0, 0.0125, 1e-3);
  SolverConfig cfg;
  cfg.n_c = 12;
  cfg.t_end = 12.0;
  const double Qbar = 7.7e-5;
  InflowProfile inflow = InflowProfile::fourier(1.0, Qbar, {}, {});
  WindkesselRCR wk{18.503e6, 104.920e6, 10.163e-9, 0.0, 9467.0};
  Solver s(g, w, cfg, inflow, wk);
  while (s.time() < cfg.t_end - 1e-9)
    s.step(cfg.t_end - s.time());
  const double expect = 0.0 + (18.503e6 + 104.920e6) * Qbar;
  const double p_outlet = s.sample(g.L0)[2];
  CHECK(p_outlet == doctest::Approx(expect).epsilon(0.005));
}

TEST_CASE("equilibrium with matched p_c emits no spurious boundary waves") {
  VesselGeometry g{.L0 = 0.24137, .R0_in = 0.0125, .R0_out = 0.0125,
                   .h0 = 1e-3, .p0 = 9467.0, .p_out = 9467.0};
  WallModel w = WallModel::make(VesselKind::artery, 0.727e6, 0.533e6, 23884.0,
                                1060.0, 0.0125, 1e-3);
  SolverConfig cfg;
  cfg.n_c = 12;
  cfg.t_end = 1.0;
  InflowProfile inflow = InflowProfile::fourier(1.0, 0.0, {}, {});
  WindkesselRCR wk{18.503e6, 104.920e6, 10.163e-9, 9467.0, 9467.0};
  Solver s(g, w, cfg, inflow, wk);
  const double P_c = 1060.0; // pressure scale rho U_c^2
  for (int k = 0; k < 300; ++k)
    s.step();
  for (int i = 0; i < cfg.n_c; ++i) {
    CHECK(std::abs(s.state().p[i] - 9467.0) < 1e-10 * P_c * 10);
    CHECK(std::abs(s.state().q[i]) < 1e-12);
  }
}

TEST_CASE("impedance-matched windkessel absorbs an incident pulse") {
  VesselGeometry g{.L0 = 0.4, .R0_in = 0.0125, .R0_out = 0.0125, .h0 = 1e-3,
                   .p0 = 9467.0, .p_out = 9467.0};
  WallModel w = WallModel::make(VesselKind::artery, 0.727e6, 0.533e6, 0.0,
                                1060.0, 0.0125, 1e-3);
  w.tau_r = 1e-6; // near-elastic wall so the pulse stays coherent
  w.eta = viscosity_from_tau_r(w.tau_r, w.E0, w.E_inf);
  const double A0 = g.area0(0.0);
  const double c0 = std::sqrt(A0 * w.E0 *
                              (0.5 / (12.5 * A0)) / 1060.0);
  const double Z0 = 1060.0 * c0 / A0;

  SolverConfig cfg;
  cfg.n_c = 200;
  cfg.t_end = 1.0;
  InflowProfile inflow = InflowProfile::fourier(1.0, 0.0, {}, {});
  WindkesselRCR wk{Z0, 104.920e6, 10.163e-9, 9467.0, 9467.0};
  Solver s(g, w, cfg, inflow, wk);

  // Gaussian pressure/area bump, still fluid: splits into two waves of
  // half amplitude; the right-mover hits the matched outlet.
  const double amp = 200.0; // Pa
  StateField &st = s.state();
  const Grid1D &grid = s.grid();
  for (int i = 0; i < cfg.n_c; ++i) {
    const double x = grid.xc[i];
    const double bump = amp * std::exp(-std::pow((x - 0.28) / 0.02, 2));
    // invert F(A) = p0 + bump to first order: dA = bump / (E_inf G)
    const double dA = bump / (w.E_inf * 0.5 / (12.5 * A0));
    st.A[i] = grid.cell[i].A0 + dA;
    st.p[i] = grid.cell[i].F(st.A[i]);
  }

  // probe two vessel-lengths of time at x = 0.3 L
  const double probe_x = 0.3 * g.L0;
  const double t_transit = (g.L0 - 0.28) / c0;
  double incident = 0.0, reflected = 0.0;
  while (s.time() < t_transit + 0.28 / c0) {
    s.step();
    const double dev = std::abs(s.sample(probe_x)[2] - 9467.0);
    if (s.time() < t_transit)
      incident = std::max(incident, dev);
    else if (s.time() > t_transit + 0.05 * g.L0 / c0)
      reflected = std::max(reflected, dev);
  }
  CHECK(incident > 10.0); // the right-moving half-pulse passed the probe
  CHECK(reflected < 0.05 * incident);
}
