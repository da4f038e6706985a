#include "hemoflow/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "hemoflow/checkpoint.hpp"

namespace hemoflow {

NonDimScales make_scales(const WaveformDataset &ds) {
  ds.geometry.validate();
  const double A_ref = ds.geometry.area0(ds.station_x);
  return NonDimScales::make(ds.geometry.L0, A_ref, ds.rho, 1.0);
}

double effective_E_inf(const WaveformDataset &ds) {
  if (ds.E_inf > 0.0)
    return ds.E_inf;
  if (ds.c_ref > 0.0)
    return calibrate_E_inf(ds.geometry, ds.rho, ds.c_ref, ds.kind);
  throw DomainError("effective_E_inf: dataset has neither E_inf nor c_ref");
}

CollocationSet build_collocation(const WaveformDataset &ds,
                                 const NonDimScales &scales, int n_stations,
                                 int n_residual_times) {
  if (std::abs(ds.period - 1.0) > 1e-9)
    throw DomainError("build_collocation: dataset must be cycle-normalized");
  if (n_stations < 1 || n_residual_times < 2)
    throw DomainError("build_collocation: bad grid sizes");

  const VesselGeometry &g = ds.geometry;
  const double E_inf = effective_E_inf(ds);

  CollocationSet cs;
  cs.kappa = scales.U_c * ds.time_scale / g.L0;

  cs.stations.resize(n_stations);
  for (int j = 0; j < n_stations; ++j) {
    const double x_hat = (j + 0.5) / n_stations;
    const double x = x_hat * g.L0;
    StationCoeffs st;
    st.x_hat = x_hat;
    st.A0_hat = g.area0(x) / scales.A_c;
    st.p0_hat = g.pressure0(x) / scales.P_c;
    st.W = WallModel::shape_W(ds.kind, g.radius(x), g.h0);
    st.m = WallModel::shape_m(ds.kind);
    st.n = WallModel::shape_n(ds.kind);
    st.E_inf_hat = E_inf / scales.P_c;
    cs.stations[j] = st;
  }

  const double x_m_hat = ds.station_x / g.L0;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    cs.xd.push_back(x_m_hat);
    cs.td.push_back(ds.t[k]);
    cs.Ad.push_back(ds.A[k] / scales.A_c);
    cs.ud.push_back(ds.u[k] / scales.U_c);
  }

  for (int j = 0; j < n_stations; ++j)
    for (int k = 0; k < n_residual_times; ++k) {
      cs.xr.push_back(cs.stations[j].x_hat);
      cs.tr.push_back(static_cast<double>(k) / (n_residual_times - 1));
      cs.rs.push_back(j);
    }

  for (int j = 0; j < n_stations; ++j) {
    cs.xi_x.push_back(cs.stations[j].x_hat);
    cs.Ai.push_back(cs.stations[j].A0_hat);
    cs.pi.push_back(cs.stations[j].p0_hat);
  }

  cs.validate();
  return cs;
}

namespace {

void record_history(TrainResult &st, long epoch, const LossBreakdown &lb,
                    const LossWeights &w) {
  TrainRecord r;
  r.epoch = epoch;
  r.Ld = lb.data;
  r.Lr = lb.residual;
  r.Lb = lb.boundary;
  r.L = lb.total(w);
  r.tau_r = st.xi.tau_r() * st.T_cycle;
  r.E0 = st.xi.E0() * st.scales.P_c;
  st.history.push_back(r);
}

void run_epochs(TrainResult &st, const TrainConfig &cfg) {
  LossEvaluator eval(st.colloc, cfg.weights);
  ThreadPool pool(cfg.threads);

  const std::size_t n_theta = st.net.n_params();
  const std::size_t n_all = n_theta + 2;
  std::vector<double> grad(n_all, 0.0);
  std::vector<double> params(n_all, 0.0);

  if (st.adam.m.size() != n_all)
    st.adam.resize(n_all);

  auto pack = [&]() {
    std::memcpy(params.data(), st.net.params.data(), n_theta * sizeof(double));
    params[n_theta] = st.xi.log_tau_r;
    params[n_theta + 1] = st.xi.log_E0;
  };
  auto unpack = [&]() {
    std::memcpy(st.net.params.data(), params.data(), n_theta * sizeof(double));
    st.xi.log_tau_r = params[n_theta];
    st.xi.log_E0 = params[n_theta + 1];
  };

  const long start_epoch = st.history.empty() ? 0 : st.history.back().epoch;
  for (long e = 0; e < cfg.epochs; ++e) {
    LossBreakdown lb;
    try {
      lb = eval.evaluate(st.net, st.xi, grad, &pool);
      if (!std::isfinite(lb.total(cfg.weights)))
        throw TrainError("train: non-finite total loss");
    } catch (const TrainError &) {
      if (!cfg.abort_checkpoint.empty())
        save_checkpoint(st, cfg.abort_checkpoint);
      throw;
    }
    if (cfg.frozen_xi) {
      grad[n_theta] = 0.0;
      grad[n_theta + 1] = 0.0;
    }

    if (e == 0 || (cfg.record_every > 0 && e % cfg.record_every == 0))
      record_history(st, start_epoch + e, lb, cfg.weights);

    pack();
    st.adam.step(cfg.learning_rate, params, grad);
    unpack();
    st.final_loss = lb;
  }
  // Closing record at the post-update state.
  LossBreakdown lb = eval.evaluate(st.net, st.xi, grad, &pool);
  st.final_loss = lb;
  record_history(st, start_epoch + cfg.epochs, lb, cfg.weights);
}

} // namespace

TrainResult train(const WaveformDataset &dataset, const TrainConfig &cfg) {
  WaveformDataset ds = normalize_cycle(dataset);
  if (cfg.n_data_times > 0 &&
      static_cast<int>(ds.size()) != cfg.n_data_times)
    ds = resample_uniform(ds, cfg.n_data_times);

  TrainResult st;
  st.T_cycle = ds.time_scale;
  st.scales = make_scales(ds);
  st.colloc = build_collocation(ds, st.scales, cfg.n_stations,
                                cfg.n_residual_times);

  std::vector<int> sizes;
  sizes.push_back(2);
  for (int h : cfg.hidden)
    sizes.push_back(h);
  sizes.push_back(3);
  st.net = MLPNet::make(sizes, cfg.seed);

  if (cfg.frozen_xi) {
    st.xi = *cfg.frozen_xi;
  } else {
    const double E_inf_hat = effective_E_inf(ds) / st.scales.P_c;
    st.xi = InverseParams::from_values(cfg.init_tau_frac,
                                       cfg.init_E0_factor * E_inf_hat);
  }
  st.adam.resize(st.net.n_params() + 2);

  run_epochs(st, cfg);
  return st;
}

void train_more(TrainResult &st, const WaveformDataset &dataset,
                const TrainConfig &cfg) {
  WaveformDataset ds = normalize_cycle(dataset);
  if (cfg.n_data_times > 0 &&
      static_cast<int>(ds.size()) != cfg.n_data_times)
    ds = resample_uniform(ds, cfg.n_data_times);
  st.colloc = build_collocation(ds, st.scales, cfg.n_stations,
                                cfg.n_residual_times);
  run_epochs(st, cfg);
}

FieldSnapshotSeries predict_fields(const MLPNet &net,
                                   const NonDimScales &scales, double T_cycle,
                                   const std::vector<double> &x_hat,
                                   const std::vector<double> &t_hat) {
  FieldSnapshotSeries fs;
  fs.x.resize(x_hat.size());
  fs.t.resize(t_hat.size());
  for (std::size_t i = 0; i < x_hat.size(); ++i)
    fs.x[i] = x_hat[i] * scales.L_c;
  for (std::size_t j = 0; j < t_hat.size(); ++j)
    fs.t[j] = t_hat[j] * T_cycle;
  fs.A.resize(x_hat.size() * t_hat.size());
  fs.u.resize(fs.A.size());
  fs.p.resize(fs.A.size());
  for (std::size_t j = 0; j < t_hat.size(); ++j)
    for (std::size_t i = 0; i < x_hat.size(); ++i) {
      double v[3];
      mlp_eval(net, x_hat[i], t_hat[j], v);
      fs.at(fs.A, j, i) = v[0] * scales.A_c;
      fs.at(fs.u, j, i) = v[1] * scales.U_c;
      fs.at(fs.p, j, i) = v[2] * scales.P_c;
    }
  return fs;
}

} // namespace hemoflow
