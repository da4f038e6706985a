#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hemoflow/vessel.hpp"

namespace hemoflow {

/// Time series of (t, A, u[, p]) at one axial station plus the geometry
/// metadata needed to nondimensionalize it.
///
/// CSV schema: `#key=value` metadata comment lines, then a `t,A,u[,p]`
/// header, then one row per sample, all in SI units.
struct WaveformDataset {
  double station_x = 0.0; ///< axial measurement station [m]
  double period = 0.0;    ///< cycle duration [s]

  std::vector<double> t; ///< sample times, strictly increasing [s]
  std::vector<double> A; ///< cross-sectional area [m^2]
  std::vector<double> u; ///< mean axial velocity [m/s]
  std::vector<double> p; ///< optional pressure [Pa]; empty if absent

  VesselGeometry geometry;
  VesselKind kind = VesselKind::artery;
  double rho = 1060.0;
  double c_ref = 0.0; ///< reference wave speed for E_inf calibration [m/s]

  // Wall parameters of the generating model (synthetic data only; zero
  // when unknown).
  double E0_ref = 0.0;
  double E_inf = 0.0;
  double eta_ref = 0.0;
  double tau_r_ref = 0.0;

  std::string provenance = "measured"; ///< "synthetic" | "measured"

  // Inverse of the cycle-normalization map: t_original = offset + scale * t.
  double time_offset = 0.0;
  double time_scale = 1.0;

  bool has_pressure() const { return !p.empty(); }
  std::size_t size() const { return t.size(); }
  void validate() const;
};

/// Rectangular space-time field sample (cross-section of a simulation or a
/// network prediction). Values stored row-major: value(it, ix).
struct FieldSnapshotSeries {
  std::vector<double> x; ///< stations [m]
  std::vector<double> t; ///< times [s]
  std::vector<double> A, u, p;

  std::size_t nx() const { return x.size(); }
  std::size_t nt() const { return t.size(); }
  double &at(std::vector<double> &f, std::size_t it, std::size_t ix) {
    return f[it * nx() + ix];
  }
  double value(const std::vector<double> &f, std::size_t it,
               std::size_t ix) const {
    return f[it * nx() + ix];
  }
  void validate() const;
};

WaveformDataset load_waveform_csv(const std::filesystem::path &path);
void save_waveform_csv(const WaveformDataset &ds,
                       const std::filesystem::path &path);

FieldSnapshotSeries load_field_csv(const std::filesystem::path &path);
void save_field_csv(const FieldSnapshotSeries &fs,
                    const std::filesystem::path &path);

/// Resamples onto N uniform times spanning [t.front(), t.back()] with a
/// monotone cubic interpolant (endpoints preserved, no overshoot).
WaveformDataset resample_uniform(const WaveformDataset &ds, int N);

/// Affinely maps the time axis onto [0, 1]; the inverse map is composed
/// into (time_offset, time_scale), so repeated application is idempotent.
WaveformDataset normalize_cycle(const WaveformDataset &ds);

/// Undoes normalize_cycle using the stored inverse map.
WaveformDataset denormalize_cycle(const WaveformDataset &ds);

/// Scales (t, A, u, p) by the given characteristic scales.
WaveformDataset nondimensionalize(const WaveformDataset &ds,
                                  const NonDimScales &s);
WaveformDataset redimensionalize(const WaveformDataset &ds,
                                 const NonDimScales &s);

} // namespace hemoflow
