#include "hemoflow/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "hemoflow/pchip.hpp"

namespace hemoflow {

SyntheticResult make_synthetic_dataset(const SyntheticConfig &cfg) {
  const double T_cycle = cfg.inflow.period();
  if (cfg.solver.t_end < 2.0 * T_cycle)
    throw ConfigError(
        "make_synthetic_dataset: t_end must cover at least two cycles");

  Solver solver(cfg.geometry, cfg.wall, cfg.solver, cfg.inflow,
                cfg.windkessel);
  const double x_m = 0.5 * cfg.geometry.L0;
  SyntheticResult out;
  out.raw = solver.simulate({x_m});

  const auto &times = out.raw.times;
  const double t_end = times.back();
  const double t_start = t_end - T_cycle;

  // Final-cycle midpoint waveform at per-step cadence.
  std::vector<double> wt, wA, wu, wp;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_start - 1e-12)
      continue;
    wt.push_back(times[k]);
    wA.push_back(out.raw.series[0][k][0]);
    wu.push_back(out.raw.series[0][k][1]);
    wp.push_back(out.raw.series[0][k][2]);
  }
  if (wt.size() < 8)
    throw SolverError("make_synthetic_dataset: too few samples in final cycle");

  WaveformDataset ds;
  ds.station_x = x_m;
  ds.period = T_cycle;
  ds.t = wt;
  ds.A = wA;
  ds.u = wu;
  ds.p = wp;
  ds.geometry = cfg.geometry;
  ds.kind = cfg.wall.kind;
  ds.rho = cfg.wall.rho;
  ds.c_ref = cfg.c_ref;
  ds.E0_ref = cfg.wall.E0;
  ds.E_inf = cfg.wall.E_inf;
  ds.eta_ref = cfg.wall.eta;
  ds.tau_r_ref = cfg.wall.tau_r;
  ds.provenance = "synthetic";
  out.waveform = resample_uniform(ds, cfg.n_data_times);

  // Full-field reference on the solver cells over the final cycle.
  const Grid1D &grid = solver.grid();
  FieldSnapshotSeries fs;
  fs.x = grid.xc;
  fs.t.resize(cfg.n_field_times);
  fs.A.resize(cfg.n_field_times * grid.n_c);
  fs.u.resize(cfg.n_field_times * grid.n_c);
  fs.p.resize(cfg.n_field_times * grid.n_c);

  // Collect the final-cycle snapshots, then interpolate each cell onto the
  // uniform field time grid.
  std::vector<double> st;
  std::vector<const StateField *> snaps;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_start - 1e-12)
      continue;
    st.push_back(times[k]);
    snaps.push_back(&out.raw.snapshots[k]);
  }
  for (int i = 0; i < grid.n_c; ++i) {
    std::vector<double> ca(st.size()), cu(st.size()), cp(st.size());
    for (std::size_t k = 0; k < st.size(); ++k) {
      ca[k] = snaps[k]->A[i];
      cu[k] = snaps[k]->q[i] / snaps[k]->A[i];
      cp[k] = snaps[k]->p[i];
    }
    PchipInterpolant ia(st, ca), iu(st, cu), ip(st, cp);
    for (int j = 0; j < cfg.n_field_times; ++j) {
      const double tj =
          st.front() + (st.back() - st.front()) *
                           static_cast<double>(j) / (cfg.n_field_times - 1);
      fs.t[j] = tj;
      fs.at(fs.A, j, i) = ia(tj);
      fs.at(fs.u, j, i) = iu(tj);
      fs.at(fs.p, j, i) = ip(tj);
    }
  }
  fs.validate();
  out.fields = std::move(fs);
  return out;
}

} // namespace hemoflow
