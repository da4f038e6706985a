#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hemoflow/dataset.hpp"
#include "hemoflow/pchip.hpp"

using namespace hemoflow;
namespace fs = std::filesystem;

namespace {

WaveformDataset small_dataset() {
  WaveformDataset ds;
  ds.station_x = 0.12;
  ds.period = 0.952;
  ds.t = {0.0, 0.3, 0.6, 0.952};
  ds.A = {4.9e-4, 5.3e-4, 5.0e-4, 4.9e-4};
  ds.u = {0.0, 0.8, 0.2, 0.0};
  ds.p = {9467.0, 12000.0, 10000.0, 9467.0};
  ds.geometry = {.L0 = 0.24137, .R0_in = 0.015, .R0_out = 0.010,
                 .h0 = 1e-3, .p0 = 9467.0};
  ds.rho = 1060.0;
  ds.c_ref = 5.494;
  ds.E0_ref = 0.727e6;
  ds.E_inf = 0.533e6;
  ds.eta_ref = 23884.0;
  ds.tau_r_ref = 0.009;
  ds.provenance = "synthetic";
  return ds;
}

fs::path tmp_file(const char *name) {
  return fs::temp_directory_path() / name;
}

} // namespace

TEST_CASE("pchip reproduces linear data and never overshoots") {
  std::vector<double> x = {0.0, 0.1, 0.35, 0.5, 0.81, 1.0, 1.4};
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    y[i] = 3.0 - 2.0 * x[i];
  PchipInterpolant ramp(x, y);
  for (double q = 0.0; q <= 1.4; q += 0.013)
    CHECK(ramp(q) == doctest::Approx(3.0 - 2.0 * q).epsilon(1e-13));

  std::vector<double> ym = {0.0, 0.0, 0.2, 1.0, 1.0, 1.0, 1.0};
  PchipInterpolant mono(x, ym);
  for (double q = 0.0; q <= 1.4; q += 0.007) {
    CHECK(mono(q) >= -1e-12);
    CHECK(mono(q) <= 1.0 + 1e-12);
  }
  // passes through the nodes
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(mono(x[i]) == doctest::Approx(ym[i]).epsilon(1e-15));
}

TEST_CASE("waveform CSV minimal file and schema errors") {
  const fs::path p = tmp_file("hf_min.csv");
  {
    std::ofstream out(p);
    out << "#period=1.0\n#L0=0.2\n#R0_in=0.01\n#R0_out=0.01\n#h0=0.001\n";
    out << "t,A,u\n0,4e-4,0\n0.5,4.2e-4,0.3\n1.0,4e-4,0\n";
  }
  WaveformDataset ds = load_waveform_csv(p);
  CHECK(ds.size() == 3);
  CHECK(!ds.has_pressure());
  CHECK(ds.period == doctest::Approx(1.0));

  {
    std::ofstream out(p);
    out << "#period=1.0\n#L0=0.2\n#R0_in=0.01\n#R0_out=0.01\n#h0=0.001\n";
    out << "t,A,u\n0,4e-4,0\n0.5,0.0,0.3\n1.0,4e-4,0\n";
  }
  CHECK_THROWS_WITH_AS(load_waveform_csv(p),
                       doctest::Contains("non-positive area at row 2"),
                       SchemaError);

  {
    std::ofstream out(p);
    out << "#period=1.0\nt,A,u\n0,4e-4,0\n0.5,4e-4\n";
  }
  CHECK_THROWS_AS(load_waveform_csv(p), SchemaError);

  {
    std::ofstream out(p);
    out << "#period=1.0\nt,A,u\n0.5,4e-4,0\n0.2,4e-4,0\n";
  }
  CHECK_THROWS_WITH_AS(load_waveform_csv(p),
                       doctest::Contains("non-monotone"), SchemaError);
}

TEST_CASE("waveform CSV round trip is bit exact") {
  const fs::path p = tmp_file("hf_round.csv");
  WaveformDataset ds = small_dataset();
  // awkward values exercise the full-precision formatting
  ds.A[1] = 5.300000000000001e-4;
  ds.u[2] = 1.0 / 3.0;
  save_waveform_csv(ds, p);
  WaveformDataset back = load_waveform_csv(p);
  REQUIRE(back.size() == ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(back.t[i] == ds.t[i]);
    CHECK(back.A[i] == ds.A[i]);
    CHECK(back.u[i] == ds.u[i]);
    CHECK(back.p[i] == ds.p[i]);
  }
  CHECK(back.station_x == ds.station_x);
  CHECK(back.period == ds.period);
  CHECK(back.geometry.L0 == ds.geometry.L0);
  CHECK(back.tau_r_ref == ds.tau_r_ref);
  CHECK(back.provenance == ds.provenance);

  // writer output reloads to the identical file on re-save
  const fs::path p2 = tmp_file("hf_round2.csv");
  save_waveform_csv(back, p2);
  std::ifstream f1(p), f2(p2);
  std::string s1((std::istreambuf_iterator<char>(f1)), {});
  std::string s2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(s1 == s2);
}

TEST_CASE("resample_uniform endpoints, identity, and ramp exactness") {
  WaveformDataset ds = small_dataset();

  // onto its own grid: values reproduced
  WaveformDataset same = resample_uniform(ds, 4);
  // (grid of 4 uniform points differs from ds.t, so compare via exact ramp)
  WaveformDataset ramp = ds;
  for (std::size_t i = 0; i < ramp.size(); ++i) {
    ramp.A[i] = 4.0e-4 + 1.0e-4 * ramp.t[i];
    ramp.u[i] = 0.5 - 0.2 * ramp.t[i];
    ramp.p[i] = 9000.0 + 100.0 * ramp.t[i];
  }
  WaveformDataset r2 = resample_uniform(ramp, 11);
  for (std::size_t i = 0; i < r2.size(); ++i) {
    CHECK(r2.A[i] == doctest::Approx(4.0e-4 + 1.0e-4 * r2.t[i]).epsilon(1e-12));
    CHECK(r2.u[i] == doctest::Approx(0.5 - 0.2 * r2.t[i]).epsilon(1e-12));
  }
  CHECK(r2.t.front() == ds.t.front());
  CHECK(r2.t.back() == ds.t.back());
  CHECK(r2.A.front() == ramp.A.front());
  CHECK(r2.A.back() == ramp.A.back());

  // constant signal stays constant
  WaveformDataset cst = ds;
  for (auto &v : cst.A)
    v = 5e-4;
  WaveformDataset rc = resample_uniform(cst, 33);
  for (double v : rc.A)
    CHECK(v == doctest::Approx(5e-4).epsilon(1e-14));

  CHECK_THROWS_AS(resample_uniform(ds, 1), DomainError);
  CHECK(same.size() == 4);
}

TEST_CASE("normalize_cycle maps to [0,1], idempotent, invertible") {
  WaveformDataset ds = small_dataset();
  WaveformDataset n1 = normalize_cycle(ds);
  CHECK(n1.t.front() == doctest::Approx(0.0));
  CHECK(n1.t.back() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(n1.period == 1.0);

  WaveformDataset n2 = normalize_cycle(n1);
  for (std::size_t i = 0; i < n1.size(); ++i)
    CHECK(n2.t[i] == doctest::Approx(n1.t[i]).epsilon(1e-15));
  CHECK(n2.time_offset == doctest::Approx(n1.time_offset));
  CHECK(n2.time_scale == doctest::Approx(n1.time_scale));

  WaveformDataset back = denormalize_cycle(n1);
  for (std::size_t i = 0; i < ds.size(); ++i)
    CHECK(back.t[i] == doctest::Approx(ds.t[i]).epsilon(1e-14));
  CHECK(back.period == doctest::Approx(ds.period).epsilon(1e-14));
}

TEST_CASE("dataset nondimensionalization round trip") {
  WaveformDataset ds = small_dataset();
  const NonDimScales s =
      NonDimScales::make(ds.geometry.L0, ds.geometry.area0(ds.station_x),
                         ds.rho);
  WaveformDataset nd = nondimensionalize(ds, s);
  WaveformDataset rd = redimensionalize(nd, s);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    CHECK(rd.A[i] == doctest::Approx(ds.A[i]).epsilon(1e-14));
    CHECK(rd.u[i] == doctest::Approx(ds.u[i]).epsilon(1e-14));
    CHECK(rd.p[i] == doctest::Approx(ds.p[i]).epsilon(1e-14));
  }
}

TEST_CASE("field CSV round trip") {
  FieldSnapshotSeries f;
  f.x = {0.1, 0.2, 0.3};
  f.t = {0.0, 0.5};
  f.A = {1, 2, 3, 4, 5, 6};
  f.u = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
  f.p = {10, 20, 30, 40, 50, 60};
  const fs::path p = tmp_file("hf_field.csv");
  save_field_csv(f, p);
  FieldSnapshotSeries g = load_field_csv(p);
  REQUIRE(g.nx() == 3);
  REQUIRE(g.nt() == 2);
  for (std::size_t k = 0; k < f.A.size(); ++k) {
    CHECK(g.A[k] == f.A[k]);
    CHECK(g.u[k] == f.u[k]);
    CHECK(g.p[k] == f.p[k]);
  }
}
