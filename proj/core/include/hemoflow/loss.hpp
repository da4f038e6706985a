#pragma once

#include <span>
#include <vector>

#include "hemoflow/mlp.hpp"
#include "hemoflow/thread_pool.hpp"

namespace hemoflow {

/// Dimensionless geometry coefficients of one residual station.
struct StationCoeffs {
  double x_hat = 0.0;
  double A0_hat = 1.0;   ///< equilibrium area / A_c
  double p0_hat = 0.0;   ///< p0 / P_c
  double W = 1.0;        ///< tube-law coefficient at the station radius
  double m = 0.5;
  double n = 0.0;
  double E_inf_hat = 0.0; ///< E_inf / P_c
};

/// Collocation points of one training problem, all in scaled variables:
/// x in [0,1] along the vessel, t in [0,1] over one cardiac cycle.
struct CollocationSet {
  /// Dimensionless transport factor U_c T_cycle / L0 multiplying the
  /// x-derivative terms (the residuals are written in cycle time).
  double kappa = 1.0;

  std::vector<StationCoeffs> stations;

  // supervised data (single measurement station)
  std::vector<double> xd, td, Ad, ud;

  // residual grid; positivity is enforced on the same points
  std::vector<double> xr, tr;
  std::vector<int> rs; ///< station index per residual point

  // initial points (t = 0) with equilibrium targets
  std::vector<double> xi_x;
  std::vector<double> Ai, pi;

  std::size_t n_data() const { return xd.size(); }
  std::size_t n_residual() const { return xr.size(); }
  std::size_t n_initial() const { return xi_x.size(); }
  void validate() const;
};

struct LossWeights {
  double data = 10.0;
  double residual = 1.0;
  double boundary = 1.0;
};

struct LossBreakdown {
  double data = 0.0;
  double residual = 0.0;
  double boundary = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0;
  double positivity = 0.0, init_area = 0.0, init_pressure = 0.0;

  double total(const LossWeights &w) const {
    return w.data * data + w.residual * residual + w.boundary * boundary;
  }
};

struct Residuals3 {
  double R1 = 0.0, R2 = 0.0, R3 = 0.0;
};

/// PDE residuals in scaled variables. R3 is the relaxation residual in its
/// asymptotic-preserving form: multiplied through by tau, so tau = 0 gives
/// exactly p - F(A).
Residuals3 apnn_residuals(const NetOutputs &o, double tau, double E0,
                          const StationCoeffs &st, double kappa);

Residuals3 apnn_residuals(const MLPNet &net, double tau, double E0, double x,
                          double t, const StationCoeffs &st, double kappa);

/// Loss terms without gradients; tau and E0 passed as raw values so the
/// relaxation limit tau = 0 can be evaluated directly.
LossBreakdown apnn_loss(const MLPNet &net, double tau, double E0,
                        const CollocationSet &cs);

/// Loss plus gradient with respect to all network parameters and the two
/// log-transformed inverse parameters. grad must have net.n_params() + 2
/// entries: [d/d theta..., d/d log_tau_r, d/d log_E0]. Work is split into
/// fixed chunks accumulated in chunk order, so the result is bit-identical
/// for any thread count.
class LossEvaluator {
public:
  LossEvaluator(CollocationSet cs, LossWeights w, int n_chunks = 64);

  const CollocationSet &collocation() const { return cs_; }
  const LossWeights &weights() const { return w_; }

  LossBreakdown evaluate(const MLPNet &net, const InverseParams &xi,
                         std::span<double> grad, ThreadPool *pool = nullptr);

private:
  struct ChunkScratch {
    std::vector<double> grad;
    Tape tape;
    double sum_d = 0, sum_r1 = 0, sum_r2 = 0, sum_r3 = 0;
    double sum_pos = 0, sum_ia = 0, sum_ip = 0;
  };
  void run_chunk(int c, const MLPNet &net, double tau, double E0);

  CollocationSet cs_;
  LossWeights w_;
  int n_chunks_;
  std::size_t total_points_ = 0;
  std::vector<ChunkScratch> scratch_;
};

} // namespace hemoflow
