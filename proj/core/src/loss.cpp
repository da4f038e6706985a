#include "hemoflow/loss.hpp"

#include <cmath>

namespace hemoflow {

namespace {

inline double pow_fast(double a, double e) {
  if (e == 0.0)
    return 1.0;
  if (e == 0.5)
    return std::sqrt(a);
  if (e == 1.0)
    return a;
  return std::pow(a, e);
}

struct TubeLawEval {
  double G, F, dG_dA;
};

inline TubeLawEval tube_law(const StationCoeffs &st, double A) {
  const double alpha = A / st.A0_hat;
  const double am = pow_fast(alpha, st.m);
  const double an = pow_fast(alpha, st.n);
  TubeLawEval e;
  const double num = st.m * am - st.n * an;
  e.G = num / (st.W * A);
  e.F = st.p0_hat + st.E_inf_hat / st.W * (am - an);
  e.dG_dA =
      (st.m * (st.m - 1.0) * am - st.n * (st.n - 1.0) * an) / (st.W * A * A);
  return e;
}

} // namespace

void CollocationSet::validate() const {
  if (xd.empty() || xr.empty() || xi_x.empty())
    throw DomainError("CollocationSet: all point sets must be nonempty");
  if (td.size() != xd.size() || Ad.size() != xd.size() || ud.size() != xd.size())
    throw DomainError("CollocationSet: inconsistent data arrays");
  if (tr.size() != xr.size() || rs.size() != xr.size())
    throw DomainError("CollocationSet: inconsistent residual arrays");
  if (Ai.size() != xi_x.size() || pi.size() != xi_x.size())
    throw DomainError("CollocationSet: inconsistent initial arrays");
  if (stations.empty())
    throw DomainError("CollocationSet: no stations");
  for (int s : rs)
    if (s < 0 || s >= static_cast<int>(stations.size()))
      throw DomainError("CollocationSet: residual station index out of range");
  if (!(kappa > 0.0))
    throw DomainError("CollocationSet: kappa must be positive");
}

Residuals3 apnn_residuals(const NetOutputs &o, double tau, double E0,
                          const StationCoeffs &st, double kappa) {
  const TubeLawEval tl = tube_law(st, o.A);
  const double Phi = o.A_x * o.u + o.A * o.u_x;
  Residuals3 r;
  r.R1 = o.A_t + kappa * Phi;
  r.R2 = o.A_t * o.u + o.A * o.u_t +
         kappa * (o.A_x * o.u * o.u + 2.0 * o.A * o.u * o.u_x) +
         kappa * o.A * o.p_x;
  r.R3 = tau * (o.p_t + kappa * E0 * tl.G * Phi) + (o.p - tl.F);
  return r;
}

Residuals3 apnn_residuals(const MLPNet &net, double tau, double E0, double x,
                          double t, const StationCoeffs &st, double kappa) {
  thread_local Tape tape;
  const NetOutputs o = mlp_forward(net, x, t, tape);
  if (!std::isfinite(o.A_x) || !std::isfinite(o.A_t) ||
      !std::isfinite(o.u_x) || !std::isfinite(o.u_t) ||
      !std::isfinite(o.p_x) || !std::isfinite(o.p_t))
    throw TrainError("apnn_residuals: non-finite derivative at (x=" +
                     std::to_string(x) + ", t=" + std::to_string(t) + ")");
  return apnn_residuals(o, tau, E0, st, kappa);
}

LossBreakdown apnn_loss(const MLPNet &net, double tau, double E0,
                        const CollocationSet &cs) {
  cs.validate();
  Tape tape;
  LossBreakdown out;
  const std::size_t Nr = cs.n_residual();
  double s1 = 0, s2 = 0, s3 = 0, spos = 0;
  for (std::size_t i = 0; i < Nr; ++i) {
    const NetOutputs o = mlp_forward(net, cs.xr[i], cs.tr[i], tape);
    const Residuals3 r =
        apnn_residuals(o, tau, E0, cs.stations[cs.rs[i]], cs.kappa);
    s1 += r.R1 * r.R1;
    s2 += r.R2 * r.R2;
    s3 += r.R3 * r.R3;
    const double d = o.p < 0.0 ? -2.0 * o.p : 0.0;
    spos += d * d;
  }
  out.r1 = s1 / Nr;
  out.r2 = s2 / Nr;
  out.r3 = s3 / Nr;
  out.residual = out.r1 + out.r2 + out.r3;
  out.positivity = spos / Nr;

  double sd = 0;
  for (std::size_t i = 0; i < cs.n_data(); ++i) {
    double v[3];
    mlp_value(net, cs.xd[i], cs.td[i], tape, v);
    const double eA = v[0] - cs.Ad[i];
    const double eu = v[1] - cs.ud[i];
    sd += eA * eA + eu * eu;
  }
  out.data = sd / cs.n_data();

  double sia = 0, sip = 0;
  for (std::size_t i = 0; i < cs.n_initial(); ++i) {
    double v[3];
    mlp_value(net, cs.xi_x[i], 0.0, tape, v);
    const double eA = v[0] - cs.Ai[i];
    const double ep = v[2] - cs.pi[i];
    sia += eA * eA;
    sip += ep * ep;
  }
  out.init_area = sia / cs.n_initial();
  out.init_pressure = sip / cs.n_initial();
  out.boundary = out.positivity + out.init_area + out.init_pressure;
  return out;
}

LossEvaluator::LossEvaluator(CollocationSet cs, LossWeights w, int n_chunks)
    : cs_(std::move(cs)), w_(w), n_chunks_(n_chunks) {
  cs_.validate();
  total_points_ = cs_.n_residual() + cs_.n_data() + cs_.n_initial();
  n_chunks_ = std::max(
      1, std::min<int>(n_chunks_, static_cast<int>(total_points_)));
  scratch_.resize(n_chunks_);
}

void LossEvaluator::run_chunk(int c, const MLPNet &net, double tau,
                              double E0) {
  ChunkScratch &sc = scratch_[c];
  const std::size_t n_params = net.n_params();
  sc.grad.assign(n_params + 2, 0.0);
  sc.sum_d = sc.sum_r1 = sc.sum_r2 = sc.sum_r3 = 0.0;
  sc.sum_pos = sc.sum_ia = sc.sum_ip = 0.0;

  const std::size_t Nr = cs_.n_residual();
  const std::size_t Nd = cs_.n_data();
  const std::size_t Ni = cs_.n_initial();
  const double kappa = cs_.kappa;

  const double crn = 2.0 * w_.residual / Nr;
  const double cpos = 8.0 * w_.boundary / Nr;
  const double cd = 2.0 * w_.data / Nd;
  const double ci = 2.0 * w_.boundary / Ni;

  const std::size_t begin = total_points_ * c / n_chunks_;
  const std::size_t end = total_points_ * (c + 1) / n_chunks_;

  double *gtheta = sc.grad.data();
  double &g_logtau = sc.grad[n_params];
  double &g_logE0 = sc.grad[n_params + 1];

  for (std::size_t idx = begin; idx < end; ++idx) {
    if (idx < Nr) {
      const std::size_t i = idx;
      const StationCoeffs &st = cs_.stations[cs_.rs[i]];
      const NetOutputs o = mlp_forward(net, cs_.xr[i], cs_.tr[i], sc.tape);

      const TubeLawEval tl = tube_law(st, o.A);
      const double Phi = o.A_x * o.u + o.A * o.u_x;
      const double R1 = o.A_t + kappa * Phi;
      const double R2 = o.A_t * o.u + o.A * o.u_t +
                        kappa * (o.A_x * o.u * o.u + 2.0 * o.A * o.u * o.u_x) +
                        kappa * o.A * o.p_x;
      const double relax_rate = o.p_t + kappa * E0 * tl.G * Phi;
      const double R3 = tau * relax_rate + (o.p - tl.F);

      sc.sum_r1 += R1 * R1;
      sc.sum_r2 += R2 * R2;
      sc.sum_r3 += R3 * R3;

      const double e1 = crn * R1;
      const double e2 = crn * R2;
      const double e3 = crn * R3;
      const double tEG = tau * E0 * tl.G;

      NetAdjoints adj;
      adj.A_t = e1 + e2 * o.u;
      adj.u_t = e2 * o.A;
      adj.p_t = e3 * tau;
      adj.A_x = kappa * (e1 * o.u + e2 * o.u * o.u + e3 * tEG * o.u);
      adj.u_x = kappa * (e1 * o.A + 2.0 * e2 * o.A * o.u + e3 * tEG * o.A);
      adj.p_x = e2 * kappa * o.A;
      adj.A = e1 * kappa * o.u_x +
              e2 * (o.u_t + 2.0 * kappa * o.u * o.u_x + kappa * o.p_x) +
              e3 * (tau * kappa * E0 * (tl.dG_dA * Phi + tl.G * o.u_x) -
                    st.E_inf_hat * tl.G);
      adj.u = e1 * kappa * o.A_x +
              e2 * (o.A_t + 2.0 * kappa * (o.A_x * o.u + o.A * o.u_x)) +
              e3 * tEG * kappa * o.A_x;
      adj.p = e3;

      if (o.p < 0.0) {
        const double d = -2.0 * o.p;
        sc.sum_pos += d * d;
        adj.p += cpos * o.p;
      }

      g_logtau += e3 * tau * relax_rate;
      g_logE0 += e3 * tau * kappa * E0 * tl.G * Phi;

      mlp_backward(net, sc.tape, adj, gtheta);
    } else if (idx < Nr + Nd) {
      const std::size_t i = idx - Nr;
      double v[3];
      mlp_value(net, cs_.xd[i], cs_.td[i], sc.tape, v);
      const double eA = v[0] - cs_.Ad[i];
      const double eu = v[1] - cs_.ud[i];
      sc.sum_d += eA * eA + eu * eu;
      const double bar[3] = {cd * eA, cd * eu, 0.0};
      mlp_value_backward(net, sc.tape, bar, gtheta);
    } else {
      const std::size_t i = idx - Nr - Nd;
      double v[3];
      mlp_value(net, cs_.xi_x[i], 0.0, sc.tape, v);
      const double eA = v[0] - cs_.Ai[i];
      const double ep = v[2] - cs_.pi[i];
      sc.sum_ia += eA * eA;
      sc.sum_ip += ep * ep;
      const double bar[3] = {ci * eA, 0.0, ci * ep};
      mlp_value_backward(net, sc.tape, bar, gtheta);
    }
  }
}

LossBreakdown LossEvaluator::evaluate(const MLPNet &net,
                                      const InverseParams &xi,
                                      std::span<double> grad,
                                      ThreadPool *pool) {
  const std::size_t n_params = net.n_params();
  if (grad.size() != n_params + 2)
    throw TrainError("LossEvaluator: gradient span must have n_params + 2");
  const double tau = xi.tau_r();
  const double E0 = xi.E0();

  if (pool && pool->size() > 1) {
    pool->parallel_chunks(n_chunks_,
                          [&](int c) { run_chunk(c, net, tau, E0); });
  } else {
    for (int c = 0; c < n_chunks_; ++c)
      run_chunk(c, net, tau, E0);
  }

  std::fill(grad.begin(), grad.end(), 0.0);
  LossBreakdown out;
  double sd = 0, s1 = 0, s2 = 0, s3 = 0, spos = 0, sia = 0, sip = 0;
  for (int c = 0; c < n_chunks_; ++c) {
    const ChunkScratch &sc = scratch_[c];
    for (std::size_t i = 0; i < grad.size(); ++i)
      grad[i] += sc.grad[i];
    sd += sc.sum_d;
    s1 += sc.sum_r1;
    s2 += sc.sum_r2;
    s3 += sc.sum_r3;
    spos += sc.sum_pos;
    sia += sc.sum_ia;
    sip += sc.sum_ip;
  }
  out.data = sd / cs_.n_data();
  out.r1 = s1 / cs_.n_residual();
  out.r2 = s2 / cs_.n_residual();
  out.r3 = s3 / cs_.n_residual();
  out.residual = out.r1 + out.r2 + out.r3;
  out.positivity = spos / cs_.n_residual();
  out.init_area = sia / cs_.n_initial();
  out.init_pressure = sip / cs_.n_initial();
  out.boundary = out.positivity + out.init_area + out.init_pressure;

  if (!std::isfinite(out.data))
    throw TrainError("loss_gradient: non-finite data loss");
  if (!std::isfinite(out.residual))
    throw TrainError("loss_gradient: non-finite residual loss");
  if (!std::isfinite(out.boundary))
    throw TrainError("loss_gradient: non-finite boundary loss");
  return out;
}

} // namespace hemoflow
