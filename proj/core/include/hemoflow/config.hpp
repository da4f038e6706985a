#pragma once

#include <filesystem>
#include <optional>

#include "hemoflow/boundary.hpp"
#include "hemoflow/solver.hpp"
#include "hemoflow/synthetic.hpp"
#include "hemoflow/train.hpp"

namespace hemoflow {

/// Parsed run configuration (JSON). Pressures, lengths, resistances and
/// compliances accept unit-suffixed strings ("9.467 kPa", "71 mmHg",
/// "15 mm", "18.503 MPa s/m3"); bare numbers are SI.
struct RunConfig {
  VesselGeometry geometry;
  VesselKind kind = VesselKind::artery;
  double rho = 1060.0;
  double c_ref = 0.0;
  double E0 = 0.0;
  double E_inf = 0.0;
  double eta = 0.0;
  double tau_r = 0.0;

  std::optional<InflowProfile> inflow;
  WindkesselRCR windkessel;
  SolverConfig solver;
  TrainConfig training;

  std::filesystem::path dataset_path;
  int field_times = 200;
  int data_times = 120;

  static RunConfig from_json_file(const std::filesystem::path &path);

  WallModel wall() const;
  SyntheticConfig synthetic() const;
};

/// Parses "value [unit]" quantities. kind selects the unit table:
/// "length", "pressure", "viscosity", "resistance", "compliance",
/// "speed", "time".
double parse_quantity(const std::string &text, const std::string &kind,
                      const std::string &field);

} // namespace hemoflow
