// hemoflow: 1D viscoelastic blood-flow simulation and physics-informed
// waveform inversion from the command line.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hemoflow/checkpoint.hpp"
#include "hemoflow/config.hpp"
#include "hemoflow/metrics.hpp"
#include "hemoflow/svg.hpp"

namespace fs = std::filesystem;
using namespace hemoflow;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
};

fs::path ensure_out_dir(const CommonOpts &c) {
  fs::path out = c.out_dir;
  if (out.empty()) {
    const char *env = std::getenv("HEMOFLOW_OUT");
    out = env ? env : "out";
  }
  fs::create_directories(out);
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_report_csv(const TrainResult &tr, const fs::path &path) {
  std::ofstream out(path);
  if (!out)
    throw SchemaError("cannot write " + path.string());
  out << "epoch,L_d,L_r,L_b,L,tau_r,E0\n";
  for (const auto &r : tr.history)
    out << r.epoch << ',' << fmt(r.Ld) << ',' << fmt(r.Lr) << ',' << fmt(r.Lb)
        << ',' << fmt(r.L) << ',' << fmt(r.tau_r) << ',' << fmt(r.E0) << "\n";
}

PlotSpec waveform_overlay_panel(const std::string &name,
                                const std::vector<double> &t,
                                const std::vector<double> &ref,
                                const std::vector<double> &pred,
                                const std::string &unit) {
  PlotSpec p;
  p.title = name;
  p.xlabel = "t [s]";
  p.ylabel = unit;
  p.series.push_back({t, ref, "reference", "#c23b3b", 1.8});
  p.series.push_back({t, pred, "prediction", "#1f6fb4", 1.5});
  char buf[64];
  std::snprintf(buf, sizeof(buf), "mean PRE = %.3g%%",
                mean_pre(pred, ref));
  p.annotations.push_back(buf);
  return p;
}

void emit_waveform_plots(const WaveformDataset &ref,
                         const std::vector<double> &pA,
                         const std::vector<double> &pu,
                         const std::vector<double> &pp, const fs::path &out) {
  std::vector<PlotSpec> panels;
  panels.push_back(waveform_overlay_panel("area", ref.t, ref.A, pA, "A [m^2]"));
  panels.push_back(
      waveform_overlay_panel("velocity", ref.t, ref.u, pu, "u [m/s]"));
  if (ref.has_pressure())
    panels.push_back(
        waveform_overlay_panel("pressure", ref.t, ref.p, pp, "p [Pa]"));
  write_panel_row(out, panels);
}

void emit_field_heatmaps(const FieldSnapshotSeries &fs_data,
                         const fs::path &dir, const std::string &stem) {
  auto emit = [&](const std::vector<double> &v, const std::string &name) {
    HeatmapSpec h;
    h.title = name;
    h.xlabel = "x [m]";
    h.ylabel = "t [s]";
    h.x = fs_data.x;
    h.y = fs_data.t;
    h.values = v;
    write_heatmap(dir / (stem + "_" + name + ".svg"), h);
  };
  emit(fs_data.A, "A");
  emit(fs_data.u, "u");
  emit(fs_data.p, "p");
}

int cmd_simulate(const CommonOpts &co) {
  RunConfig rc = RunConfig::from_json_file(co.config_path);
  const fs::path out = ensure_out_dir(co);
  SyntheticConfig sc = rc.synthetic();

  Solver solver(sc.geometry, sc.wall, sc.solver, sc.inflow, sc.windkessel);
  SimOutput sim = solver.simulate({0.5 * sc.geometry.L0});

  // Midpoint waveform over the whole run.
  WaveformDataset wf;
  wf.station_x = 0.5 * sc.geometry.L0;
  wf.period = sc.inflow.period();
  wf.geometry = sc.geometry;
  wf.kind = sc.wall.kind;
  wf.rho = sc.wall.rho;
  wf.c_ref = sc.c_ref;
  wf.E0_ref = sc.wall.E0;
  wf.E_inf = sc.wall.E_inf;
  wf.eta_ref = sc.wall.eta;
  wf.tau_r_ref = sc.wall.tau_r;
  wf.provenance = "synthetic";
  for (std::size_t k = 0; k < sim.times.size(); ++k) {
    if (!wf.t.empty() && !(sim.times[k] > wf.t.back()))
      continue;
    wf.t.push_back(sim.times[k]);
    wf.A.push_back(sim.series[0][k][0]);
    wf.u.push_back(sim.series[0][k][1]);
    wf.p.push_back(sim.series[0][k][2]);
  }
  save_waveform_csv(wf, out / "waveform_mid.csv");

  // Cell-averaged fields, thinned to at most ~600 frames.
  const std::size_t stride =
      std::max<std::size_t>(1, sim.snapshots.size() / 600);
  FieldSnapshotSeries ff;
  ff.x = solver.grid().xc;
  for (std::size_t k = 0; k < sim.snapshots.size(); k += stride) {
    ff.t.push_back(sim.times[k]);
    const StateField &s = sim.snapshots[k];
    for (int i = 0; i < solver.grid().n_c; ++i) {
      ff.A.push_back(s.A[i]);
      ff.u.push_back(s.q[i] / s.A[i]);
      ff.p.push_back(s.p[i]);
    }
  }
  save_field_csv(ff, out / "fields.csv");

  // Plots: last cycle at the midpoint + pressure map.
  const double T = sc.inflow.period();
  const double t1 = sim.times.back(), t0 = t1 - T;
  std::vector<double> lt, lA, lu, lp;
  for (std::size_t k = 0; k < sim.times.size(); ++k)
    if (sim.times[k] >= t0 - 1e-12) {
      lt.push_back(sim.times[k]);
      lA.push_back(sim.series[0][k][0]);
      lu.push_back(sim.series[0][k][1]);
      lp.push_back(sim.series[0][k][2]);
    }
  std::vector<PlotSpec> panels(3);
  panels[0].title = "area (final cycle)";
  panels[0].series.push_back({lt, lA, "", "#1f6fb4", 1.6});
  panels[1].title = "velocity (final cycle)";
  panels[1].series.push_back({lt, lu, "", "#1f6fb4", 1.6});
  panels[2].title = "pressure (final cycle)";
  panels[2].series.push_back({lt, lp, "", "#1f6fb4", 1.6});
  for (auto &p : panels) {
    p.xlabel = "t [s]";
    p.ylabel = "";
  }
  write_panel_row(out / "waveform_mid.svg", panels);
  emit_field_heatmaps(ff, out, "fields");

  std::cout << "simulate: " << sim.times.size() - 1 << " steps, outputs in "
            << out << "\n";
  return 0;
}

int cmd_generate_data(const CommonOpts &co) {
  RunConfig rc = RunConfig::from_json_file(co.config_path);
  const fs::path out = ensure_out_dir(co);
  SyntheticResult res = make_synthetic_dataset(rc.synthetic());
  save_waveform_csv(res.waveform, out / "waveform.csv");
  save_field_csv(res.fields, out / "fields_ref.csv");
  emit_field_heatmaps(res.fields, out, "fields_ref");
  std::cout << "generate-data: " << res.waveform.size()
            << " waveform samples, reference fields " << res.fields.nt() << "x"
            << res.fields.nx() << ", outputs in " << out << "\n";
  return 0;
}

int cmd_train(const CommonOpts &co) {
  RunConfig rc = RunConfig::from_json_file(co.config_path);
  const fs::path out = ensure_out_dir(co);
  if (rc.dataset_path.empty())
    throw ConfigError("config: 'dataset' path required for train");
  WaveformDataset ds = load_waveform_csv(rc.dataset_path);

  TrainConfig tc = rc.training;
  if (co.seed_set)
    tc.seed = co.seed;
  tc.threads = co.threads;
  tc.abort_checkpoint = (out / "abort_checkpoint.json").string();

  TrainResult tr = train(ds, tc);

  write_report_csv(tr, out / "report.csv");
  save_checkpoint(tr, out / "checkpoint.json");

  // Parameter history with dataset reference values when available.
  std::vector<double> ep, tau, e0;
  for (const auto &r : tr.history) {
    ep.push_back(static_cast<double>(r.epoch));
    tau.push_back(r.tau_r);
    e0.push_back(r.E0);
  }
  std::vector<PlotSpec> hist(2);
  hist[0].title = "tau_r";
  hist[0].xlabel = "epoch";
  hist[0].ylabel = "tau_r [s]";
  hist[0].series.push_back({ep, tau, "estimate", "#1f6fb4", 1.6});
  if (ds.tau_r_ref > 0.0)
    hist[0].hlines.push_back({ds.tau_r_ref, "reference"});
  hist[1].title = "E0";
  hist[1].xlabel = "epoch";
  hist[1].ylabel = "E0 [Pa]";
  hist[1].series.push_back({ep, e0, "estimate", "#1f6fb4", 1.6});
  if (ds.E0_ref > 0.0)
    hist[1].hlines.push_back({ds.E0_ref, "reference"});
  write_panel_row(out / "history.svg", hist);

  std::vector<double> Ld, Lr, Lb, Lt;
  for (const auto &r : tr.history) {
    Ld.push_back(r.Ld);
    Lr.push_back(r.Lr);
    Lb.push_back(r.Lb);
    Lt.push_back(r.L);
  }
  PlotSpec lp;
  lp.title = "training loss";
  lp.xlabel = "epoch";
  lp.ylabel = "loss";
  lp.log_y = true;
  lp.series.push_back({ep, Lt, "total", "#222222", 1.8});
  lp.series.push_back({ep, Ld, "data", "#1f6fb4", 1.2});
  lp.series.push_back({ep, Lr, "residual", "#2e8540", 1.2});
  lp.series.push_back({ep, Lb, "boundary", "#c23b3b", 1.2});
  write_line_plot(out / "loss.svg", lp);

  // Predicted fields on the residual grid + waveform overlay at the
  // measurement station.
  std::vector<double> xh, th;
  for (const auto &st : tr.colloc.stations)
    xh.push_back(st.x_hat);
  const int nt = 200;
  for (int k = 0; k < nt; ++k)
    th.push_back(static_cast<double>(k) / (nt - 1));
  FieldSnapshotSeries pf = predict_fields(tr.net, tr.scales, tr.T_cycle, xh, th);
  save_field_csv(pf, out / "predicted_fields.csv");
  emit_field_heatmaps(pf, out, "predicted_fields");

  WaveformDataset dn = normalize_cycle(ds);
  std::vector<double> pA(dn.size()), pu(dn.size()), pp(dn.size());
  const double xm_hat = dn.station_x / dn.geometry.L0;
  for (std::size_t k = 0; k < dn.size(); ++k) {
    double v[3];
    mlp_eval(tr.net, xm_hat, dn.t[k], v);
    pA[k] = v[0] * tr.scales.A_c;
    pu[k] = v[1] * tr.scales.U_c;
    pp[k] = v[2] * tr.scales.P_c;
  }
  emit_waveform_plots(ds, pA, pu, pp, out / "overlay.svg");
  if (ds.has_pressure()) {
    PlotSpec pre;
    pre.title = "percentage relative error";
    pre.xlabel = "t [s]";
    pre.ylabel = "PRE [%]";
    pre.series.push_back({ds.t, pre_curve(pA, ds.A), "area", "#1f6fb4", 1.3});
    pre.series.push_back(
        {ds.t, pre_curve(pu, ds.u), "velocity", "#2e8540", 1.3});
    pre.series.push_back(
        {ds.t, pre_curve(pp, ds.p), "pressure", "#c23b3b", 1.3});
    write_line_plot(out / "pre.svg", pre);
  }

  std::cout << "train: final tau_r = " << tr.tau_r_si()
            << " s, E0 = " << tr.E0_si() << " Pa, L = "
            << tr.final_loss.total(tc.weights) << ", outputs in " << out
            << "\n";
  return 0;
}

int cmd_predict(const CommonOpts &co, const std::string &checkpoint,
                int stations, int times) {
  const fs::path out = ensure_out_dir(co);
  TrainResult tr = load_checkpoint(checkpoint);
  std::vector<double> xh, th;
  for (int j = 0; j < stations; ++j)
    xh.push_back((j + 0.5) / stations);
  for (int k = 0; k < times; ++k)
    th.push_back(static_cast<double>(k) / (times - 1));
  FieldSnapshotSeries pf = predict_fields(tr.net, tr.scales, tr.T_cycle, xh, th);
  save_field_csv(pf, out / "predicted_fields.csv");
  emit_field_heatmaps(pf, out, "predicted_fields");
  std::cout << "predict: tau_r = " << tr.tau_r_si()
            << " s, E0 = " << tr.E0_si() << " Pa, fields " << pf.nt() << "x"
            << pf.nx() << " in " << out << "\n";
  return 0;
}

int cmd_plot(const CommonOpts &co, const std::string &waveform,
             const std::string &overlay, const std::string &field,
             const std::string &history) {
  const fs::path out = ensure_out_dir(co);
  bool did = false;
  if (!waveform.empty() && !overlay.empty()) {
    WaveformDataset ref = load_waveform_csv(waveform);
    WaveformDataset pred = load_waveform_csv(overlay);
    if (pred.size() != ref.size())
      throw SchemaError("plot: waveforms have different sample counts");
    emit_waveform_plots(ref, pred.A, pred.u,
                        pred.has_pressure() ? pred.p
                                            : std::vector<double>(ref.size()),
                        out / "overlay.svg");
    did = true;
  }
  if (!field.empty()) {
    FieldSnapshotSeries f = load_field_csv(field);
    emit_field_heatmaps(f, out, fs::path(field).stem().string());
    did = true;
  }
  if (!history.empty()) {
    std::ifstream in(history);
    if (!in)
      throw SchemaError("plot: cannot open " + history);
    std::string line;
    std::getline(in, line);
    std::vector<double> ep, tau, e0;
    while (std::getline(in, line)) {
      double e, a, b, c, d, t, E;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf", &e, &a, &b,
                      &c, &d, &t, &E) == 7) {
        ep.push_back(e);
        tau.push_back(t);
        e0.push_back(E);
      }
    }
    std::vector<PlotSpec> hist(2);
    hist[0].title = "tau_r";
    hist[0].xlabel = "epoch";
    hist[0].ylabel = "tau_r [s]";
    hist[0].series.push_back({ep, tau, "estimate", "#1f6fb4", 1.6});
    hist[1].title = "E0";
    hist[1].xlabel = "epoch";
    hist[1].ylabel = "E0 [Pa]";
    hist[1].series.push_back({ep, e0, "estimate", "#1f6fb4", 1.6});
    write_panel_row(out / "history.svg", hist);
    did = true;
  }
  if (!did)
    throw ConfigError("plot: nothing to do (pass --waveform/--overlay, "
                      "--field, or --history)");
  std::cout << "plot: outputs in " << out << "\n";
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"1D viscoelastic blood flow: simulation, synthetic data, and "
               "physics-informed parameter inversion"};
  app.require_subcommand(1);

  CommonOpts co;
  app.add_option("--out", co.out_dir, "output directory (or HEMOFLOW_OUT)");
  app.add_option("--threads", co.threads, "worker threads (1 = fully serial)");
  auto *seed_opt = app.add_option("--seed", co.seed, "RNG seed override");

  std::string checkpoint;
  int stations = 12, times = 200;
  std::string waveform, overlay, field, history;

  auto *sim = app.add_subcommand("simulate", "run the flow solver");
  sim->add_option("--config", co.config_path, "JSON configuration")->required();

  auto *gen = app.add_subcommand("generate-data",
                                 "solve and emit the synthetic dataset");
  gen->add_option("--config", co.config_path, "JSON configuration")->required();

  auto *trn = app.add_subcommand("train", "train the inverse network");
  trn->add_option("--config", co.config_path, "JSON configuration")->required();

  auto *prd = app.add_subcommand("predict", "evaluate a trained checkpoint");
  prd->add_option("--checkpoint", checkpoint, "checkpoint JSON")->required();
  prd->add_option("--stations", stations, "stations in the output grid");
  prd->add_option("--times", times, "time samples in the output grid");

  auto *plt = app.add_subcommand("plot", "render CSV outputs as SVG");
  plt->add_option("--waveform", waveform, "reference waveform CSV");
  plt->add_option("--overlay", overlay, "prediction waveform CSV");
  plt->add_option("--field", field, "field CSV (t,x,A,u,p)");
  plt->add_option("--history", history, "training report CSV");

  CLI11_PARSE(app, argc, argv);
  co.seed_set = seed_opt->count() > 0;

  try {
    if (sim->parsed())
      return cmd_simulate(co);
    if (gen->parsed())
      return cmd_generate_data(co);
    if (trn->parsed())
      return cmd_train(co);
    if (prd->parsed())
      return cmd_predict(co, checkpoint, stations, times);
    if (plt->parsed())
      return cmd_plot(co, waveform, overlay, field, history);
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
