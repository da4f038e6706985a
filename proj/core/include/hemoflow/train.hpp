#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hemoflow/adam.hpp"
#include "hemoflow/dataset.hpp"
#include "hemoflow/loss.hpp"

namespace hemoflow {

struct TrainConfig {
  std::vector<int> hidden = {32, 32, 32};
  long epochs = 200000;
  double learning_rate = 1e-3;
  LossWeights weights;
  std::uint64_t seed = 1;
  int threads = 1;
  long record_every = 100;

  int n_stations = 12;
  int n_residual_times = 200;
  int n_data_times = 120; ///< 0 keeps the dataset sampling as-is

  double init_tau_frac = 0.05;  ///< tau_r(0) = frac * T_cycle
  double init_E0_factor = 1.5;  ///< E0(0) = factor * E_inf

  /// When set, a checkpoint of the last finite state is written if the
  /// loss turns non-finite.
  std::string abort_checkpoint;

  /// Optional frozen inverse parameters (forward problem): when set, xi is
  /// excluded from the optimizer and pinned to these scaled values.
  std::optional<InverseParams> frozen_xi;
};

struct TrainRecord {
  long epoch = 0;
  double Ld = 0, Lr = 0, Lb = 0, L = 0;
  double tau_r = 0; ///< redimensionalized [s]
  double E0 = 0;    ///< redimensionalized [Pa]
};

struct TrainResult {
  MLPNet net;
  InverseParams xi;
  AdamState adam{0};
  std::vector<TrainRecord> history;
  LossBreakdown final_loss;

  NonDimScales scales;
  double T_cycle = 0.0; ///< seconds per cycle
  CollocationSet colloc;

  double tau_r_si() const { return xi.tau_r() * T_cycle; }
  double E0_si() const { return xi.E0() * scales.P_c; }
};

/// Builds the scaled collocation problem for a dataset: residual stations
/// laid out like cell centers over [0, L0], a uniform residual time grid
/// over the cycle, data at the measurement station, and equilibrium
/// initial targets.
CollocationSet build_collocation(const WaveformDataset &normalized,
                                 const NonDimScales &scales, int n_stations,
                                 int n_residual_times);

NonDimScales make_scales(const WaveformDataset &ds);

/// Effective asymptotic modulus for the residuals: dataset metadata when
/// present, otherwise calibrated from the reference wave speed.
double effective_E_inf(const WaveformDataset &ds);

/// Full-batch Adam training of (theta, xi) on one waveform dataset.
/// Deterministic for a fixed seed, independent of the thread count.
TrainResult train(const WaveformDataset &dataset, const TrainConfig &cfg);

/// Continues training from an existing state (used by self-consistency
/// studies); mutates result in place.
void train_more(TrainResult &state, const WaveformDataset &dataset,
                const TrainConfig &cfg);

/// Evaluates the network over a scaled space-time grid and returns
/// redimensionalized fields.
FieldSnapshotSeries predict_fields(const MLPNet &net,
                                   const NonDimScales &scales, double T_cycle,
                                   const std::vector<double> &x_hat,
                                   const std::vector<double> &t_hat);

} // namespace hemoflow
