#include "hemoflow/config.hpp"

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace hemoflow {

namespace {

const std::map<std::string, std::map<std::string, double>> &unit_tables() {
  static const std::map<std::string, std::map<std::string, double>> tables = {
      {"length", {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}}},
      {"pressure",
       {{"Pa", 1.0},
        {"kPa", 1e3},
        {"MPa", 1e6},
        {"GPa", 1e9},
        {"mmHg", 133.322387415}}},
      {"viscosity", {{"Pa s", 1.0}, {"kPa s", 1e3}, {"MPa s", 1e6}}},
      {"resistance",
       {{"Pa s/m3", 1.0},
        {"kPa s/m3", 1e3},
        {"MPa s/m3", 1e6},
        {"GPa s/m3", 1e9}}},
      {"compliance",
       {{"m3/Pa", 1.0},
        {"m3/kPa", 1e-3},
        {"m3/MPa", 1e-6},
        {"m3/GPa", 1e-9}}},
      {"speed", {{"m/s", 1.0}, {"cm/s", 1e-2}}},
      {"time", {{"s", 1.0}, {"ms", 1e-3}}},
  };
  return tables;
}

} // namespace

double parse_quantity(const std::string &text, const std::string &kind,
                      const std::string &field) {
  std::size_t pos = 0;
  double value;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception &) {
    throw ConfigError("config: bad number for '" + field + "': " + text);
  }
  while (pos < text.size() && text[pos] == ' ')
    ++pos;
  std::string unit = text.substr(pos);
  while (!unit.empty() && unit.back() == ' ')
    unit.pop_back();
  if (unit.empty())
    return value; // SI
  const auto &tables = unit_tables();
  const auto tb = tables.find(kind);
  if (tb == tables.end())
    throw ConfigError("config: unknown quantity kind " + kind);
  const auto it = tb->second.find(unit);
  if (it == tb->second.end())
    throw ConfigError("config: unknown unit '" + unit + "' for '" + field +
                      "'");
  return value * it->second;
}

namespace {

double get_quantity(const nlohmann::json &j, const std::string &key,
                    const std::string &kind, std::optional<double> dflt = {}) {
  if (!j.contains(key)) {
    if (dflt)
      return *dflt;
    throw ConfigError("config: missing field '" + key + "'");
  }
  const auto &v = j.at(key);
  if (v.is_number())
    return v.get<double>();
  if (v.is_string())
    return parse_quantity(v.get<std::string>(), kind, key);
  throw ConfigError("config: field '" + key + "' must be number or string");
}

} // namespace

RunConfig RunConfig::from_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("config: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception &e) {
    throw ConfigError("config: bad JSON in " + path.string() + ": " +
                      e.what());
  }

  RunConfig rc;
  const auto &g = j.at("geometry");
  rc.geometry.L0 = get_quantity(g, "L0", "length");
  rc.geometry.R0_in = get_quantity(g, "R0_in", "length");
  rc.geometry.R0_out = get_quantity(g, "R0_out", "length");
  rc.geometry.h0 = get_quantity(g, "h0", "length");
  rc.geometry.validate();

  const auto &w = j.at("wall");
  const std::string kind = w.value("kind", "artery");
  if (kind != "artery" && kind != "vein")
    throw ConfigError("config: wall.kind must be 'artery' or 'vein'");
  rc.kind = kind == "vein" ? VesselKind::vein : VesselKind::artery;
  rc.rho = get_quantity(w, "rho", "pressure", 1060.0);
  rc.c_ref = get_quantity(w, "c_ref", "speed", 0.0);
  rc.E_inf = get_quantity(w, "E_inf", "pressure", 0.0);
  if (rc.E_inf == 0.0) {
    if (!(rc.c_ref > 0.0))
      throw ConfigError("config: wall needs E_inf or c_ref");
    rc.E_inf = calibrate_E_inf(rc.geometry, rc.rho, rc.c_ref, rc.kind);
  }
  rc.E0 = get_quantity(w, "E0", "pressure", 0.0);
  rc.eta = get_quantity(w, "eta", "viscosity", 0.0);
  rc.tau_r = get_quantity(w, "tau_r", "time", 0.0);
  if (rc.E0 > 0.0) {
    if (rc.eta > 0.0 && rc.tau_r == 0.0)
      rc.tau_r = calibrate_tau_r(rc.eta, rc.E0, rc.E_inf);
    else if (rc.tau_r > 0.0 && rc.eta == 0.0)
      rc.eta = viscosity_from_tau_r(rc.tau_r, rc.E0, rc.E_inf);
    else if (rc.tau_r > 0.0 && rc.eta > 0.0) {
      const double t = calibrate_tau_r(rc.eta, rc.E0, rc.E_inf);
      if (std::abs(t - rc.tau_r) > 1e-6 * rc.tau_r)
        throw ConfigError("config: eta and tau_r are inconsistent");
    }
  }

  if (j.contains("boundary")) {
    const auto &b = j.at("boundary");
    rc.geometry.p0 = get_quantity(b, "p0", "pressure", 0.0);
    rc.geometry.p_out = get_quantity(b, "p_out", "pressure", 0.0);
    if (b.contains("inflow")) {
      const auto &fi = b.at("inflow");
      const std::string mode = fi.value("mode", "csv");
      if (mode == "csv") {
        std::filesystem::path p = fi.at("path").get<std::string>();
        if (p.is_relative())
          p = path.parent_path() / p;
        if (!std::filesystem::exists(p))
          throw ConfigError("config: inflow CSV not found: " + p.string());
        rc.inflow = InflowProfile::from_csv(p);
      } else if (mode == "fourier") {
        rc.inflow = InflowProfile::fourier(
            get_quantity(fi, "period", "time"), fi.value("a0", 0.0),
            fi.value("a", std::vector<double>{}),
            fi.value("b", std::vector<double>{}));
      } else {
        throw ConfigError("config: inflow.mode must be 'csv' or 'fourier'");
      }
    }
    if (b.contains("windkessel")) {
      const auto &wk = b.at("windkessel");
      rc.windkessel.R1 = get_quantity(wk, "R1", "resistance");
      rc.windkessel.R2 = get_quantity(wk, "R2", "resistance");
      rc.windkessel.C = get_quantity(wk, "C", "compliance");
      rc.windkessel.p_out = rc.geometry.p_out;
      rc.windkessel.p_c = get_quantity(wk, "p_c0", "pressure",
                                       rc.geometry.p0);
      rc.windkessel.validate();
    }
  }

  if (j.contains("solver")) {
    const auto &s = j.at("solver");
    rc.solver.n_c = s.value("cells", 12);
    rc.solver.cfl = s.value("cfl", 0.9);
    rc.solver.t_end = get_quantity(s, "t_end", "time", 20.0);
    rc.solver.dt_floor = s.value("dt_floor", 1e-9);
    if (s.contains("tableau")) {
      std::filesystem::path p = s.at("tableau").get<std::string>();
      if (p.is_relative())
        p = path.parent_path() / p;
      rc.solver.tableau = ImexTableau::from_json_file(p.string());
    }
    rc.solver.validate();
  }

  if (j.contains("training")) {
    const auto &t = j.at("training");
    rc.training.epochs = t.value("epochs", 200000L);
    rc.training.learning_rate = t.value("learning_rate", 1e-3);
    if (t.contains("weights")) {
      const auto &lw = t.at("weights");
      rc.training.weights.data = lw.value("data", 10.0);
      rc.training.weights.residual = lw.value("residual", 1.0);
      rc.training.weights.boundary = lw.value("boundary", 1.0);
    }
    rc.training.seed = t.value("seed", 1ULL);
    rc.training.record_every = t.value("record_every", 100L);
    rc.training.n_stations = t.value("stations", 12);
    rc.training.n_residual_times = t.value("residual_times", 200);
    rc.training.n_data_times = t.value("data_times", 120);
    rc.training.hidden = t.value("hidden", std::vector<int>{32, 32, 32});
    rc.training.init_tau_frac = t.value("init_tau_frac", 0.05);
    rc.training.init_E0_factor = t.value("init_E0_factor", 1.5);
  }

  if (j.contains("dataset")) {
    std::filesystem::path p = j.at("dataset").get<std::string>();
    if (p.is_relative())
      p = path.parent_path() / p;
    rc.dataset_path = p;
  }
  if (j.contains("output")) {
    rc.field_times = j.at("output").value("field_times", 200);
    rc.data_times = j.at("output").value("data_times", 120);
  }
  return rc;
}

WallModel RunConfig::wall() const {
  if (!(E0 > 0.0))
    throw ConfigError("config: wall block incomplete (E0 required)");
  return WallModel::make(kind, E0, E_inf, eta, rho, geometry.mean_radius(),
                         geometry.h0);
}

SyntheticConfig RunConfig::synthetic() const {
  if (!inflow)
    throw ConfigError("config: boundary.inflow required for simulation");
  SyntheticConfig sc;
  sc.geometry = geometry;
  sc.wall = wall();
  sc.inflow = *inflow;
  sc.windkessel = windkessel;
  sc.solver = solver;
  sc.c_ref = c_ref;
  sc.n_data_times = data_times;
  sc.n_field_times = field_times;
  return sc;
}

} // namespace hemoflow
