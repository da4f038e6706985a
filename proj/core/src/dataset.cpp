#include "hemoflow/dataset.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hemoflow/errors.hpp"
#include "hemoflow/pchip.hpp"

namespace hemoflow {

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string &s, const std::string &where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos != s.size())
      throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception &) {
    throw SchemaError("invalid number '" + s + "' at " + where);
  }
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string &s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

} // namespace

void WaveformDataset::validate() const {
  if (t.empty() || A.size() != t.size() || u.size() != t.size())
    throw SchemaError("WaveformDataset: empty or inconsistent column sizes");
  if (!p.empty() && p.size() != t.size())
    throw SchemaError("WaveformDataset: pressure column size mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i > 0 && !(t[i] > t[i - 1]))
      throw SchemaError("WaveformDataset: non-monotone time at row " +
                        std::to_string(i + 1));
    if (!(A[i] > 0.0))
      throw SchemaError("WaveformDataset: non-positive area at row " +
                        std::to_string(i + 1));
    if (!std::isfinite(t[i]) || !std::isfinite(A[i]) || !std::isfinite(u[i]))
      throw SchemaError("WaveformDataset: non-finite value at row " +
                        std::to_string(i + 1));
  }
  if (!(period > 0.0))
    throw SchemaError("WaveformDataset: period must be positive");
}

void FieldSnapshotSeries::validate() const {
  const std::size_t n = nx() * nt();
  if (A.size() != n || u.size() != n || p.size() != n)
    throw SchemaError("FieldSnapshotSeries: non-rectangular field arrays");
  for (double v : A)
    if (!std::isfinite(v))
      throw SchemaError("FieldSnapshotSeries: non-finite area value");
}

WaveformDataset load_waveform_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open waveform file: " + path.string());

  WaveformDataset ds;
  std::map<std::string, std::string> meta;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  bool has_p = false;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty())
      continue;
    if (s[0] == '#') {
      const auto eq = s.find('=');
      if (eq != std::string::npos)
        meta[trim(s.substr(1, eq - 1))] = trim(s.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      const auto cols = split_csv(s);
      if (cols.size() == 3 && trim(cols[0]) == "t" && trim(cols[1]) == "A" &&
          trim(cols[2]) == "u") {
        has_p = false;
      } else if (cols.size() == 4 && trim(cols[0]) == "t" &&
                 trim(cols[1]) == "A" && trim(cols[2]) == "u" &&
                 trim(cols[3]) == "p") {
        has_p = true;
      } else {
        throw SchemaError("expected header 't,A,u[,p]' at line " +
                          std::to_string(line_no) + " of " + path.string());
      }
      header_seen = true;
      continue;
    }
    const auto cols = split_csv(s);
    if (cols.size() != (has_p ? 4u : 3u))
      throw SchemaError("wrong column count at line " +
                        std::to_string(line_no) + " of " + path.string());
    const std::string where =
        "line " + std::to_string(line_no) + " of " + path.string();
    ds.t.push_back(parse_double(cols[0], where));
    ds.A.push_back(parse_double(cols[1], where));
    ds.u.push_back(parse_double(cols[2], where));
    if (has_p)
      ds.p.push_back(parse_double(cols[3], where));
  }
  if (!header_seen)
    throw SchemaError("missing 't,A,u[,p]' header in " + path.string());

  auto get = [&](const char *key, double dflt) {
    auto it = meta.find(key);
    return it == meta.end() ? dflt : parse_double(it->second, key);
  };
  ds.station_x = get("station_x", 0.0);
  ds.period = get("period", 0.0);
  ds.geometry.L0 = get("L0", 0.0);
  ds.geometry.R0_in = get("R0_in", 0.0);
  ds.geometry.R0_out = get("R0_out", 0.0);
  ds.geometry.h0 = get("h0", 0.0);
  ds.geometry.p0 = get("p0", 0.0);
  ds.geometry.p_out = get("p_out", 0.0);
  ds.rho = get("rho", 1060.0);
  ds.c_ref = get("c_ref", 0.0);
  ds.E0_ref = get("E0", 0.0);
  ds.E_inf = get("E_inf", 0.0);
  ds.eta_ref = get("eta", 0.0);
  ds.tau_r_ref = get("tau_r", 0.0);
  ds.time_offset = get("time_offset", 0.0);
  ds.time_scale = get("time_scale", 1.0);
  if (auto it = meta.find("kind"); it != meta.end())
    ds.kind = it->second == "vein" ? VesselKind::vein : VesselKind::artery;
  if (auto it = meta.find("provenance"); it != meta.end())
    ds.provenance = it->second;

  ds.validate();
  return ds;
}

void save_waveform_csv(const WaveformDataset &ds,
                       const std::filesystem::path &path) {
  ds.validate();
  std::ofstream out(path);
  if (!out)
    throw SchemaError("cannot write waveform file: " + path.string());
  out << "#station_x=" << fmt_full(ds.station_x) << "\n";
  out << "#period=" << fmt_full(ds.period) << "\n";
  out << "#L0=" << fmt_full(ds.geometry.L0) << "\n";
  out << "#R0_in=" << fmt_full(ds.geometry.R0_in) << "\n";
  out << "#R0_out=" << fmt_full(ds.geometry.R0_out) << "\n";
  out << "#h0=" << fmt_full(ds.geometry.h0) << "\n";
  out << "#p0=" << fmt_full(ds.geometry.p0) << "\n";
  out << "#p_out=" << fmt_full(ds.geometry.p_out) << "\n";
  out << "#rho=" << fmt_full(ds.rho) << "\n";
  out << "#c_ref=" << fmt_full(ds.c_ref) << "\n";
  out << "#E0=" << fmt_full(ds.E0_ref) << "\n";
  out << "#E_inf=" << fmt_full(ds.E_inf) << "\n";
  out << "#eta=" << fmt_full(ds.eta_ref) << "\n";
  out << "#tau_r=" << fmt_full(ds.tau_r_ref) << "\n";
  out << "#time_offset=" << fmt_full(ds.time_offset) << "\n";
  out << "#time_scale=" << fmt_full(ds.time_scale) << "\n";
  out << "#kind=" << (ds.kind == VesselKind::vein ? "vein" : "artery") << "\n";
  out << "#provenance=" << ds.provenance << "\n";
  out << (ds.has_pressure() ? "t,A,u,p" : "t,A,u") << "\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << fmt_full(ds.t[i]) << ',' << fmt_full(ds.A[i]) << ','
        << fmt_full(ds.u[i]);
    if (ds.has_pressure())
      out << ',' << fmt_full(ds.p[i]);
    out << "\n";
  }
}

FieldSnapshotSeries load_field_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw SchemaError("cannot open field file: " + path.string());
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::vector<double> t, x, A, u, p;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#')
      continue;
    if (!header_seen) {
      if (trim(s) != "t,x,A,u,p")
        throw SchemaError("expected header 't,x,A,u,p' in " + path.string());
      header_seen = true;
      continue;
    }
    const auto cols = split_csv(s);
    if (cols.size() != 5)
      throw SchemaError("wrong column count at line " +
                        std::to_string(line_no) + " of " + path.string());
    const std::string where = "line " + std::to_string(line_no);
    t.push_back(parse_double(cols[0], where));
    x.push_back(parse_double(cols[1], where));
    A.push_back(parse_double(cols[2], where));
    u.push_back(parse_double(cols[3], where));
    p.push_back(parse_double(cols[4], where));
  }
  if (t.empty())
    throw SchemaError("empty field file: " + path.string());

  // Rows are emitted time-major with a fixed station list per time.
  FieldSnapshotSeries fs;
  std::size_t nx = 1;
  while (nx < t.size() && t[nx] == t[0])
    ++nx;
  if (t.size() % nx != 0)
    throw SchemaError("ragged field file: " + path.string());
  fs.x.assign(x.begin(), x.begin() + nx);
  for (std::size_t i = 0; i < t.size(); i += nx)
    fs.t.push_back(t[i]);
  fs.A = std::move(A);
  fs.u = std::move(u);
  fs.p = std::move(p);
  fs.validate();
  return fs;
}

void save_field_csv(const FieldSnapshotSeries &fs,
                    const std::filesystem::path &path) {
  fs.validate();
  std::ofstream out(path);
  if (!out)
    throw SchemaError("cannot write field file: " + path.string());
  out << "t,x,A,u,p\n";
  for (std::size_t it = 0; it < fs.nt(); ++it)
    for (std::size_t ix = 0; ix < fs.nx(); ++ix)
      out << fmt_full(fs.t[it]) << ',' << fmt_full(fs.x[ix]) << ','
          << fmt_full(fs.value(fs.A, it, ix)) << ','
          << fmt_full(fs.value(fs.u, it, ix)) << ','
          << fmt_full(fs.value(fs.p, it, ix)) << "\n";
}

WaveformDataset resample_uniform(const WaveformDataset &ds, int N) {
  ds.validate();
  if (N < 2)
    throw DomainError("resample_uniform: N must be >= 2");
  PchipInterpolant ia(ds.t, ds.A), iu(ds.t, ds.u);
  PchipInterpolant ip;
  if (ds.has_pressure())
    ip = PchipInterpolant(ds.t, ds.p);

  WaveformDataset out = ds;
  out.t.assign(N, 0.0);
  out.A.assign(N, 0.0);
  out.u.assign(N, 0.0);
  out.p.clear();
  if (ds.has_pressure())
    out.p.assign(N, 0.0);

  const double t0 = ds.t.front(), t1 = ds.t.back();
  for (int i = 0; i < N; ++i) {
    const double ti =
        i == N - 1 ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / (N - 1);
    out.t[i] = ti;
    out.A[i] = ia(ti);
    out.u[i] = iu(ti);
    if (ds.has_pressure())
      out.p[i] = ip(ti);
  }
  // Interpolation passes through the nodes; pin the endpoints exactly.
  out.A.front() = ds.A.front();
  out.A.back() = ds.A.back();
  out.u.front() = ds.u.front();
  out.u.back() = ds.u.back();
  if (ds.has_pressure()) {
    out.p.front() = ds.p.front();
    out.p.back() = ds.p.back();
  }
  return out;
}

WaveformDataset normalize_cycle(const WaveformDataset &ds) {
  ds.validate();
  WaveformDataset out = ds;
  const double t0 = ds.t.front();
  const double T = ds.period;
  for (auto &ti : out.t)
    ti = (ti - t0) / T;
  out.time_offset = ds.time_offset + t0 * ds.time_scale;
  out.time_scale = ds.time_scale * T;
  out.period = 1.0;
  return out;
}

WaveformDataset denormalize_cycle(const WaveformDataset &ds) {
  WaveformDataset out = ds;
  for (auto &ti : out.t)
    ti = ds.time_offset + ds.time_scale * ti;
  out.period = ds.period * ds.time_scale;
  out.time_offset = 0.0;
  out.time_scale = 1.0;
  return out;
}

WaveformDataset nondimensionalize(const WaveformDataset &ds,
                                  const NonDimScales &s) {
  s.validate();
  WaveformDataset out = ds;
  out.station_x = ds.station_x / s.L_c;
  out.period = ds.period / s.T_c;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.t[i] = ds.t[i] / s.T_c;
    out.A[i] = ds.A[i] / s.A_c;
    out.u[i] = ds.u[i] / s.U_c;
    if (ds.has_pressure())
      out.p[i] = ds.p[i] / s.P_c;
  }
  return out;
}

WaveformDataset redimensionalize(const WaveformDataset &ds,
                                 const NonDimScales &s) {
  s.validate();
  WaveformDataset out = ds;
  out.station_x = ds.station_x * s.L_c;
  out.period = ds.period * s.T_c;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out.t[i] = ds.t[i] * s.T_c;
    out.A[i] = ds.A[i] * s.A_c;
    out.u[i] = ds.u[i] * s.U_c;
    if (ds.has_pressure())
      out.p[i] = ds.p[i] * s.P_c;
  }
  return out;
}

} // namespace hemoflow
