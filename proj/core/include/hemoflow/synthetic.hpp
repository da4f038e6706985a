#pragma once

#include "hemoflow/dataset.hpp"
#include "hemoflow/solver.hpp"

namespace hemoflow {

struct SyntheticConfig {
  VesselGeometry geometry;
  WallModel wall;
  InflowProfile inflow;
  WindkesselRCR windkessel;
  SolverConfig solver;
  double c_ref = 0.0;        ///< recorded in the dataset metadata
  int n_data_times = 120;    ///< waveform samples over the final cycle
  int n_field_times = 200;   ///< full-field samples over the final cycle
};

struct SyntheticResult {
  WaveformDataset waveform;    ///< midpoint (A, u, p), final cycle
  FieldSnapshotSeries fields;  ///< cell-centered reference, final cycle
  SimOutput raw;               ///< full run, per-step cadence
};

/// Runs the solver on the given configuration and extracts the final
/// (periodic) cycle: the midpoint waveform resampled to n_data_times and
/// the cell-averaged reference fields resampled to n_field_times.
SyntheticResult make_synthetic_dataset(const SyntheticConfig &cfg);

} // namespace hemoflow
