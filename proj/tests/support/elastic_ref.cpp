#include "support/elastic_ref.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hemoflow::testsupport {

ElasticRefSolver::ElasticRefSolver(const ElasticRefConfig &cfg,
                                   std::vector<double> A,
                                   std::vector<double> u)
    : cfg_(cfg), A_(std::move(A)) {
  if (static_cast<int>(A_.size()) != cfg_.n_c || u.size() != A_.size())
    throw std::invalid_argument("ElasticRefSolver: bad initial data");
  dx_ = cfg_.L0 / cfg_.n_c;
  q_.resize(A_.size());
  for (std::size_t i = 0; i < A_.size(); ++i)
    q_[i] = A_[i] * u[i];
}

double ElasticRefSolver::wave_speed(double A) const {
  const double a = A / cfg_.A0;
  const double G = (cfg_.m * std::pow(a, cfg_.m) - cfg_.n * std::pow(a, cfg_.n)) /
                   (cfg_.W * A);
  return std::sqrt(A * cfg_.E_inf * G / cfg_.rho);
}

double ElasticRefSolver::momentum_potential(double A) const {
  const double a = A / cfg_.A0;
  const double mm = cfg_.m, nn = cfg_.n;
  double val = mm / (mm + 1.0) * std::pow(a, mm + 1.0);
  if (nn != 0.0)
    val -= nn / (nn + 1.0) * std::pow(a, nn + 1.0);
  return cfg_.E_inf / cfg_.rho * cfg_.A0 / cfg_.W * val;
}

void ElasticRefSolver::rhs(const std::vector<double> &A,
                           const std::vector<double> &q,
                           std::vector<double> &dA,
                           std::vector<double> &dq) const {
  const int n = cfg_.n_c;
  auto wrap = [&](int i) { return ((i % n) + n) % n; };

  // Unlimited parabolic face reconstruction (smooth periodic data).
  std::vector<double> AL(n), AR(n), qL(n), qR(n);
  for (int i = 0; i < n; ++i) {
    const double am = A[wrap(i - 1)], a0 = A[i], ap = A[wrap(i + 1)];
    AL[i] = (2.0 * am + 5.0 * a0 - ap) / 6.0;
    AR[i] = (-am + 5.0 * a0 + 2.0 * ap) / 6.0;
    const double bm = q[wrap(i - 1)], b0 = q[i], bp = q[wrap(i + 1)];
    qL[i] = (2.0 * bm + 5.0 * b0 - bp) / 6.0;
    qR[i] = (-bm + 5.0 * b0 + 2.0 * bp) / 6.0;
  }

  auto flux = [&](double Af, double qf, double &f1, double &f2) {
    f1 = qf;
    f2 = qf * qf / Af + momentum_potential(Af);
  };

  std::vector<double> F1(n + 1), F2(n + 1);
  for (int k = 0; k < n; ++k) {
    // interface between cell k-1 and k (wrap at 0)
    const int iL = wrap(k - 1), iR = k;
    const double Al = AR[iL], ql = qR[iL];
    const double Ar = AL[iR], qr = qL[iR];
    double f1l, f2l, f1r, f2r;
    flux(Al, ql, f1l, f2l);
    flux(Ar, qr, f1r, f2r);
    const double sl = std::abs(ql / Al) + wave_speed(Al);
    const double sr = std::abs(qr / Ar) + wave_speed(Ar);
    const double s = std::max(sl, sr);
    F1[k] = 0.5 * (f1l + f1r) - 0.5 * s * (Ar - Al);
    F2[k] = 0.5 * (f2l + f2r) - 0.5 * s * (qr - ql);
  }
  F1[n] = F1[0];
  F2[n] = F2[0];

  dA.resize(n);
  dq.resize(n);
  for (int i = 0; i < n; ++i) {
    dA[i] = -(F1[i + 1] - F1[i]) / dx_;
    dq[i] = -(F2[i + 1] - F2[i]) / dx_;
  }
}

void ElasticRefSolver::advance_to(double t_end) {
  std::vector<double> k1A, k1q, k2A, k2q, k3A, k3q;
  std::vector<double> A1(cfg_.n_c), q1(cfg_.n_c), A2(cfg_.n_c), q2(cfg_.n_c);
  while (t_ < t_end - 1e-14) {
    double smax = 0.0;
    for (int i = 0; i < cfg_.n_c; ++i)
      smax = std::max(smax, std::abs(q_[i] / A_[i]) + wave_speed(A_[i]));
    double dt = cfg_.cfl * dx_ / smax;
    dt = std::min(dt, t_end - t_);

    rhs(A_, q_, k1A, k1q);
    for (int i = 0; i < cfg_.n_c; ++i) {
      A1[i] = A_[i] + dt * k1A[i];
      q1[i] = q_[i] + dt * k1q[i];
    }
    rhs(A1, q1, k2A, k2q);
    for (int i = 0; i < cfg_.n_c; ++i) {
      A2[i] = 0.75 * A_[i] + 0.25 * (A1[i] + dt * k2A[i]);
      q2[i] = 0.75 * q_[i] + 0.25 * (q1[i] + dt * k2q[i]);
    }
    rhs(A2, q2, k3A, k3q);
    for (int i = 0; i < cfg_.n_c; ++i) {
      A_[i] = A_[i] / 3.0 + 2.0 / 3.0 * (A2[i] + dt * k3A[i]);
      q_[i] = q_[i] / 3.0 + 2.0 / 3.0 * (q2[i] + dt * k3q[i]);
    }
    t_ += dt;
  }
}

std::vector<double> ElasticRefSolver::velocity() const {
  std::vector<double> u(A_.size());
  for (std::size_t i = 0; i < A_.size(); ++i)
    u[i] = q_[i] / A_[i];
  return u;
}

std::vector<double> ElasticRefSolver::pressure() const {
  std::vector<double> p(A_.size());
  for (std::size_t i = 0; i < A_.size(); ++i) {
    const double a = A_[i] / cfg_.A0;
    p[i] = cfg_.p0 + cfg_.E_inf / cfg_.W *
                         (std::pow(a, cfg_.m) - std::pow(a, cfg_.n));
  }
  return p;
}

} // namespace hemoflow::testsupport
