#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hemoflow/boundary.hpp"
#include "hemoflow/grid.hpp"
#include "hemoflow/imex.hpp"
#include "hemoflow/weno.hpp"

namespace hemoflow {

struct SolverConfig {
  int n_c = 12;
  double cfl = 0.9;
  double t_end = 20.0;
  double dt_floor = 1e-9; ///< abort below this step size [s]
  ImexTableau tableau = ImexTableau::ars443();

  void validate() const {
    if (!(cfl > 0.0) || cfl > 1.0)
      throw ConfigError("SolverConfig: CFL must lie in (0, 1]");
    if (n_c < 3)
      throw ConfigError("SolverConfig: at least 3 cells required");
    if (!(t_end > 0.0))
      throw ConfigError("SolverConfig: t_end must be positive");
    tableau.validate();
  }
};

/// Per-step mass bookkeeping: the cell-integrated area should change by
/// exactly the net boundary flux integral of the step.
struct MassBalanceRecord {
  double mass_before = 0.0;
  double mass_after = 0.0;
  double boundary_flux_integral = 0.0;
  double defect() const {
    return mass_after - mass_before - boundary_flux_integral;
  }
};

/// Result of a full simulation run: per-step station waveforms plus the
/// cell-averaged space-time history.
struct SimOutput {
  std::vector<double> stations;
  std::vector<double> times;
  // series[s][k] = (A, u, p) at stations[s], times[k]
  std::vector<std::vector<Vec3>> series;
  std::vector<StateField> snapshots;
  std::vector<double> inflow_trace; ///< prescribed mass flux at the inlet
  std::vector<MassBalanceRecord> mass;
};

/// Third-order AP IMEX finite-volume integrator of the viscoelastic system.
class Solver {
public:
  /// Physical boundaries: inflow profile at x=0, Windkessel at x=L0.
  Solver(const VesselGeometry &geom, const WallModel &wall,
         const SolverConfig &cfg, InflowProfile inflow, WindkesselRCR wk);

  /// Periodic domain (test problems); requires a non-tapered vessel.
  static Solver periodic(const VesselGeometry &geom, const WallModel &wall,
                         const SolverConfig &cfg);

  const Grid1D &grid() const { return grid_; }
  const StateField &state() const { return state_; }
  StateField &state() { return state_; }
  const WindkesselRCR &windkessel() const { return wk_.value(); }
  WindkesselRCR &windkessel() { return wk_.value(); }
  double time() const { return state_.t; }

  /// CFL time step for the current state.
  double suggest_dt() const;

  /// Advances one IMEX-RK step of size min(suggest_dt(), dt_cap).
  MassBalanceRecord step(double dt_cap = std::numeric_limits<double>::max());

  /// Runs until cfg.t_end, recording per-step samples at the stations
  /// (defaults to the vessel midpoint).
  SimOutput simulate(std::vector<double> stations = {});

  /// Point sample of the reconstructed solution at station x.
  Vec3 sample(double x) const;

private:
  struct Transport {
    std::vector<Vec3> rhs; ///< -(1/dx)(flux differences + NC terms)
    double inflow_mass_flux = 0.0;
    double outflow_mass_flux = 0.0;
    double pc_candidate = 0.0;
  };
  Transport transport(const StateField &Y, double t_stage, double dt) const;

  Grid1D grid_;
  SolverConfig cfg_;
  WallModel wall_;
  bool periodic_ = false;
  std::optional<InflowProfile> inflow_;
  std::optional<WindkesselRCR> wk_;
  StateField state_;
};

/// Closed-form implicitly integrated relaxation stage for the pressure
/// component: solves p' = p* - (dt_eff/tau)(p' - F_A), i.e.
/// p' = (tau p* + dt_eff F_A)/(tau + dt_eff). tau = 0 projects onto the
/// relaxed equilibrium p' = F_A, preserving the AP property.
inline double implicit_relaxation_stage(double p_star, double F_A,
                                        double dt_eff, double tau) {
  if (!(dt_eff > 0.0))
    throw SolverError("implicit_relaxation_stage: requires dt_eff > 0");
  if (tau < 0.0)
    throw SolverError("implicit_relaxation_stage: requires tau >= 0");
  return (tau * p_star + dt_eff * F_A) / (tau + dt_eff);
}

} // namespace hemoflow
