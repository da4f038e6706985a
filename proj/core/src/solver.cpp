#include "hemoflow/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hemoflow/riemann.hpp"

namespace hemoflow {

Solver::Solver(const VesselGeometry &geom, const WallModel &wall,
               const SolverConfig &cfg, InflowProfile inflow,
               WindkesselRCR wk)
    : grid_(Grid1D::make(geom, wall, cfg.n_c)), cfg_(cfg), wall_(wall),
      inflow_(std::move(inflow)), wk_(wk) {
  cfg_.validate();
  wk_->validate();
  state_ = StateField::equilibrium(grid_);
}

Solver Solver::periodic(const VesselGeometry &geom, const WallModel &wall,
                        const SolverConfig &cfg) {
  if (geom.R0_in != geom.R0_out)
    throw ConfigError("Solver::periodic: requires a non-tapered vessel");
  Solver s(geom, wall, cfg,
           InflowProfile::fourier(1.0, 0.0, {}, {}),
           WindkesselRCR{1.0, 1.0, 1.0, 0.0, 0.0});
  s.periodic_ = true;
  s.inflow_.reset();
  s.wk_.reset();
  return s;
}

double Solver::suggest_dt() const {
  double smax = 0.0;
  for (int i = 0; i < grid_.n_c; ++i) {
    const double u = state_.q[i] / state_.A[i];
    const double c = grid_.cell[i].wave_speed(state_.A[i]);
    smax = std::max(smax, std::abs(u) + c);
  }
  if (!(smax > 0.0))
    throw SolverError("suggest_dt: vanishing wave speeds");
  return cfg_.cfl * grid_.dx / smax;
}

Solver::Transport Solver::transport(const StateField &Y, double t_stage,
                                    double dt) const {
  const int n = grid_.n_c;
  const BoundaryTreatment bt =
      periodic_ ? BoundaryTreatment::periodic : BoundaryTreatment::one_sided;

  static thread_local Reconstruction rA, rq, rp;
  weno3_reconstruct(Y.A, bt, rA);
  weno3_reconstruct(Y.q, bt, rq);
  weno3_reconstruct(Y.p, bt, rp);

  auto left_state = [&](int iface) -> Vec3 {
    const int i = iface - 1;
    return {rA.right[i], rq.right[i], rp.right[i]};
  };
  auto right_state = [&](int iface) -> Vec3 {
    const int i = iface;
    return {rA.left[i], rq.left[i], rp.left[i]};
  };

  std::vector<Vec3> flux(n + 1), bhalf(n + 1, Vec3{0.0, 0.0, 0.0});

  for (int k = 1; k < n; ++k) {
    const InterfaceTerms it =
        dot_flux(left_state(k), right_state(k), grid_.iface[k]);
    flux[k] = it.flux;
    bhalf[k] = it.bjump_half;
  }

  Transport out;
  if (periodic_) {
    const Vec3 QL = {rA.right[n - 1], rq.right[n - 1], rp.right[n - 1]};
    const Vec3 QR = {rA.left[0], rq.left[0], rp.left[0]};
    const InterfaceTerms it = dot_flux(QL, QR, grid_.iface[0]);
    flux[0] = flux[n] = it.flux;
    bhalf[0] = bhalf[n] = it.bjump_half;
    out.inflow_mass_flux = it.flux[0];
    out.outflow_mass_flux = it.flux[0];
  } else {
    const Vec3 Q0 = {Y.A[0], Y.q[0], Y.p[0]};
    const BoundaryState in =
        inflow_boundary(Q0, grid_.iface[0], inflow_->flow(t_stage));
    flux[0] = physical_flux(in.conserved());

    const Vec3 QN = {Y.A[n - 1], Y.q[n - 1], Y.p[n - 1]};
    const OutletSolution os =
        windkessel_boundary(QN, grid_.iface[n], *wk_, dt);
    flux[n] = physical_flux(os.state.conserved());
    out.pc_candidate = os.p_c_new;
    out.inflow_mass_flux = flux[0][0];
    out.outflow_mass_flux = flux[n][0];
  }

  out.rhs.assign(n, Vec3{0.0, 0.0, 0.0});
  const double inv_dx = 1.0 / grid_.dx;
  for (int i = 0; i < n; ++i) {
    // In-cell parabola P(xi) = qbar + D xi + k2 (xi^2 - 1/12) recovered
    // from the cell average and the two face values.
    const double dA = rA.right[i] - rA.left[i];
    const double dq = rq.right[i] - rq.left[i];
    const double dp = rp.right[i] - rp.left[i];
    const double kA = 3.0 * (rA.left[i] + rA.right[i] - 2.0 * Y.A[i]);
    const double kq = 3.0 * (rq.left[i] + rq.right[i] - 2.0 * Y.q[i]);
    const double kp = 3.0 * (rp.left[i] + rp.right[i] - 2.0 * Y.p[i]);

    Vec3 C = {0.0, 0.0, 0.0};
    for (int g = 0; g < 3; ++g) {
      const double xi = Grid1D::gauss_xi[g];
      const double w = Grid1D::gauss_w[g];
      const double Axi = Y.A[i] + dA * xi + kA * (xi * xi - 1.0 / 12.0);
      const double dq_dxi = dq + 2.0 * kq * xi;
      const double dp_dxi = dp + 2.0 * kp * xi;
      const SystemCoeffs &cg = grid_.gauss[i][g];
      if (!(Axi > 0.0))
        throw SolverError("transport: reconstructed area non-positive in cell " +
                          std::to_string(i));
      C[1] += w * (Axi / cg.rho) * dp_dxi;
      C[2] += w * cg.E0 * cg.G(Axi) * dq_dxi;
    }

    for (int k = 0; k < 3; ++k)
      out.rhs[i][k] = -inv_dx * (flux[i + 1][k] - flux[i][k] +
                                 bhalf[i + 1][k] + bhalf[i][k] + C[k]);
  }
  return out;
}

MassBalanceRecord Solver::step(double dt_cap) {
  const double dt = std::min(suggest_dt(), dt_cap);
  if (dt < cfg_.dt_floor)
    throw SolverError("step: time step below floor at t = " +
                      std::to_string(state_.t));

  const ImexTableau &tb = cfg_.tableau;
  const int s = tb.stages;
  const int n = grid_.n_c;
  const double tau = wall_.tau_r;

  MassBalanceRecord rec;
  rec.mass_before = 0.0;
  for (int i = 0; i < n; ++i)
    rec.mass_before += state_.A[i] * grid_.dx;

  std::vector<Transport> T(s);
  std::vector<std::vector<double>> K(s); // implicit source, pressure row
  double pc_last = wk_ ? wk_->p_c : 0.0;

  T[0] = transport(state_, state_.t + tb.c_ex[0] * dt, dt);
  pc_last = T[0].pc_candidate;

  for (int j = 1; j < s; ++j) {
    StateField Q = state_;
    for (int k = 0; k < j; ++k) {
      const double ae = dt * tb.A_ex[j][k];
      if (ae != 0.0)
        for (int i = 0; i < n; ++i) {
          Q.A[i] += ae * T[k].rhs[i][0];
          Q.q[i] += ae * T[k].rhs[i][1];
          Q.p[i] += ae * T[k].rhs[i][2];
        }
      const double ai = dt * tb.A_im[j][k];
      if (ai != 0.0 && !K[k].empty())
        for (int i = 0; i < n; ++i)
          Q.p[i] += ai * K[k][i];
    }
    for (int i = 0; i < n; ++i)
      if (!(Q.A[i] > 0.0))
        throw SolverError("step: positivity failure in cell " +
                          std::to_string(i) + " at t = " +
                          std::to_string(state_.t));

    const double dt_eff = dt * tb.A_im[j][j];
    K[j].assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double FA = grid_.cell[i].F(Q.A[i]);
      const double p_star = Q.p[i];
      Q.p[i] = implicit_relaxation_stage(p_star, FA, dt_eff, tau);
      K[j][i] = (FA - p_star) / (tau + dt_eff);
    }

    Q.t = state_.t + tb.c_ex[j] * dt;
    T[j] = transport(Q, Q.t, dt);
    pc_last = T[j].pc_candidate;
  }

  StateField next = state_;
  double flux_integral = 0.0;
  for (int k = 0; k < s; ++k) {
    const double be = dt * tb.b_ex[k];
    if (be != 0.0) {
      for (int i = 0; i < n; ++i) {
        next.A[i] += be * T[k].rhs[i][0];
        next.q[i] += be * T[k].rhs[i][1];
        next.p[i] += be * T[k].rhs[i][2];
      }
    }
    flux_integral +=
        dt * tb.b_ex[k] * (T[k].inflow_mass_flux - T[k].outflow_mass_flux);
    const double bi = dt * tb.b_im[k];
    if (bi != 0.0 && !K[k].empty())
      for (int i = 0; i < n; ++i)
        next.p[i] += bi * K[k][i];
  }
  next.t = state_.t + dt;
  for (int i = 0; i < n; ++i)
    if (!(next.A[i] > 0.0))
      throw SolverError("step: positivity failure in cell " +
                        std::to_string(i) + " at t = " +
                        std::to_string(next.t));

  state_ = std::move(next);
  if (wk_)
    wk_->p_c = pc_last;

  rec.mass_after = 0.0;
  for (int i = 0; i < n; ++i)
    rec.mass_after += state_.A[i] * grid_.dx;
  rec.boundary_flux_integral = flux_integral;
  return rec;
}

Vec3 Solver::sample(double x) const {
  const int n = grid_.n_c;
  x = std::clamp(x, 0.0, grid_.L0);
  const BoundaryTreatment bt =
      periodic_ ? BoundaryTreatment::periodic : BoundaryTreatment::one_sided;
  static thread_local Reconstruction rA, rq, rp;
  weno3_reconstruct(state_.A, bt, rA);
  weno3_reconstruct(state_.q, bt, rq);
  weno3_reconstruct(state_.p, bt, rp);

  auto eval_cell = [&](int i, double xi) -> Vec3 {
    auto eval = [&](const Reconstruction &r, const std::vector<double> &avg) {
      const double d = r.right[i] - r.left[i];
      const double k2 = 3.0 * (r.left[i] + r.right[i] - 2.0 * avg[i]);
      return avg[i] + d * xi + k2 * (xi * xi - 1.0 / 12.0);
    };
    const double A = eval(rA, state_.A);
    const double q = eval(rq, state_.q);
    const double p = eval(rp, state_.p);
    return {A, q / A, p};
  };

  const double pos = x / grid_.dx;
  const int iface = static_cast<int>(std::round(pos));
  if (std::abs(pos - iface) < 1e-9 && iface >= 1 && iface <= n - 1) {
    const Vec3 a = eval_cell(iface - 1, 0.5);
    const Vec3 b = eval_cell(iface, -0.5);
    return {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
  }
  const int i = std::clamp(static_cast<int>(pos), 0, n - 1);
  return eval_cell(i, pos - i - 0.5);
}

SimOutput Solver::simulate(std::vector<double> stations) {
  if (stations.empty())
    stations = {0.5 * grid_.L0};
  SimOutput out;
  out.stations = stations;
  out.series.resize(stations.size());

  auto record = [&]() {
    out.times.push_back(state_.t);
    for (std::size_t s = 0; s < stations.size(); ++s)
      out.series[s].push_back(sample(stations[s]));
    out.snapshots.push_back(state_);
    out.inflow_trace.push_back(
        periodic_ ? 0.0 : inflow_->flow(state_.t));
  };

  record();
  while (state_.t < cfg_.t_end - 1e-12) {
    out.mass.push_back(step(cfg_.t_end - state_.t));
    record();
  }
  return out;
}

} // namespace hemoflow
