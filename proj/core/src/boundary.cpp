#include "hemoflow/boundary.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "hemoflow/errors.hpp"

namespace hemoflow {

namespace {

// 16-point Gauss-Legendre nodes/weights on [0, 1].
constexpr int kGL = 8;
constexpr double gl_x[kGL] = {0.0198550717512319, 0.1016667612931866,
                              0.2372337950418355, 0.4082826787521751,
                              0.5917173212478249, 0.7627662049581645,
                              0.8983332387068134, 0.9801449282487681};
constexpr double gl_w[kGL] = {0.0506142681451881, 0.1111905172266872,
                              0.1568533229389436, 0.1813418916891810,
                              0.1813418916891810, 0.1568533229389436,
                              0.1111905172266872, 0.0506142681451881};

double psi(double alpha, double m, double n) {
  return std::pow(alpha, m) - std::pow(alpha, n);
}

} // namespace

double riemann_invariant_integral(double A, const SystemCoeffs &c) {
  if (!(A > 0.0))
    throw SolverError("riemann_invariant_integral: non-positive area");
  const double alpha = A / c.A0;
  if (c.n == 0.0) {
    // Closed form: c(a) ~ a^{m/2}, so int c/a da = (2/m)(c(alpha) - c(1)).
    const double c_eq = std::sqrt(c.E0 * c.m / (c.rho * c.W));
    const double c_a = c_eq * std::pow(alpha, 0.5 * c.m);
    return (2.0 / c.m) * (c_a - c_eq);
  }
  // General tube law: Gauss quadrature of c(a)/a over alpha in [1, alpha].
  const double span = alpha - 1.0;
  double acc = 0.0;
  for (int k = 0; k < kGL; ++k) {
    const double a = 1.0 + span * gl_x[k];
    const double cs = std::sqrt(
        c.E0 * (c.m * std::pow(a, c.m) - c.n * std::pow(a, c.n)) /
        (c.rho * c.W));
    acc += gl_w[k] * cs / a;
  }
  return span * acc;
}

BoundaryState inflow_boundary(const Vec3 &Q_interior, const SystemCoeffs &c,
                              double Q_t) {
  const double A1 = Q_interior[0];
  if (!(A1 > 0.0))
    throw SolverError("inflow_boundary: non-positive interior area");
  const double u1 = Q_interior[1] / A1;
  const double p1 = Q_interior[2];
  const double Jm = u1 - riemann_invariant_integral(A1, c);

  const double vel_scale = std::max(c.wave_speed(A1), 1.0);
  double A = A1;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const double g = Q_t / A - Jm - riemann_invariant_integral(A, c);
    if (std::abs(g) < 1e-10 * vel_scale) {
      converged = true;
      break;
    }
    const double dg = -Q_t / (A * A) - c.wave_speed(A) / A;
    double step = -g / dg;
    int guard = 0;
    while (A + step <= 0.0 && guard++ < 8)
      step *= 0.5;
    if (A + step <= 0.0)
      throw SolverError("inflow_boundary: iterate left the A > 0 domain");
    A += step;
  }
  if (!converged)
    throw SolverError("inflow_boundary: characteristic solve did not converge");

  BoundaryState bs;
  bs.A = A;
  bs.u = Q_t / A;
  const double a1 = A1 / c.A0, ab = A / c.A0;
  bs.p = p1 + c.E0 / c.W * (psi(ab, c.m, c.n) - psi(a1, c.m, c.n));
  return bs;
}

OutletSolution windkessel_boundary(const Vec3 &Q_interior,
                                   const SystemCoeffs &c,
                                   const WindkesselRCR &wk, double dt) {
  wk.validate();
  if (!(dt > 0.0))
    throw SolverError("windkessel_boundary: requires dt > 0");
  const double AN = Q_interior[0];
  if (!(AN > 0.0))
    throw SolverError("windkessel_boundary: non-positive interior area");
  const double uN = Q_interior[1] / AN;
  const double pN = Q_interior[2];
  const double Jp = uN + riemann_invariant_integral(AN, c);

  const double f = dt / wk.C;
  const double pc_den = 1.0 + f / wk.R2;
  auto pc_new = [&](double Q) {
    return (wk.p_c + f * (Q + wk.p_out / wk.R2)) / pc_den;
  };
  const double dpc_dQ = f / pc_den;

  const double aN = AN / c.A0;
  const double p_scale =
      std::max({std::abs(pN), std::abs(wk.p_c), c.E0 / c.W, 1.0});

  double A = AN;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const double u = Jp - riemann_invariant_integral(A, c);
    const double Q = A * u;
    const double pw =
        pN + c.E0 / c.W * (psi(A / c.A0, c.m, c.n) - psi(aN, c.m, c.n));
    const double g = pw - pc_new(Q) - wk.R1 * Q;
    if (std::abs(g) < 1e-10 * p_scale) {
      converged = true;
      break;
    }
    const double cs = c.wave_speed(A);
    const double dg = c.E0 * c.G(A) - (dpc_dQ + wk.R1) * (u - cs);
    double step = -g / dg;
    int guard = 0;
    while (A + step <= 0.0 && guard++ < 8)
      step *= 0.5;
    if (A + step <= 0.0)
      throw SolverError("windkessel_boundary: iterate left the A > 0 domain");
    A += step;
  }
  if (!converged)
    throw SolverError("windkessel_boundary: coupling solve did not converge");

  OutletSolution sol;
  sol.state.A = A;
  sol.state.u = Jp - riemann_invariant_integral(A, c);
  sol.state.p =
      pN + c.E0 / c.W * (psi(A / c.A0, c.m, c.n) - psi(aN, c.m, c.n));
  sol.p_c_new = pc_new(sol.state.Q());
  return sol;
}

InflowProfile InflowProfile::tabulated(std::vector<double> t,
                                       std::vector<double> Q, double period) {
  if (t.size() < 2 || t.size() != Q.size())
    throw ConfigError("InflowProfile: needs >= 2 tabulated samples");
  if (!(period > 0.0))
    throw ConfigError("InflowProfile: period must be positive");
  InflowProfile p;
  p.tabulated_ = true;
  p.period_ = period;
  p.t0_ = t.front();
  const double cover = t.back() - t.front();
  if (cover > period * (1.0 + 1e-9))
    throw ConfigError("InflowProfile: samples exceed one period");
  double qmax = 0.0;
  for (double q : Q)
    qmax = std::max(qmax, std::abs(q));
  if (cover >= period * (1.0 - 1e-9)) {
    if (std::abs(Q.back() - Q.front()) > 1e-9 * std::max(qmax, 1e-300))
      throw ConfigError(
          "InflowProfile: discontinuous periodic extension at the wrap");
    t.back() = t.front() + period;
    Q.back() = Q.front();
  } else {
    // Close the period with the wrap sample.
    t.push_back(t.front() + period);
    Q.push_back(Q.front());
  }
  p.interp_ = PchipInterpolant(std::move(t), std::move(Q));
  return p;
}

InflowProfile InflowProfile::fourier(double period, double a0,
                                     std::vector<double> a,
                                     std::vector<double> b) {
  if (!(period > 0.0))
    throw ConfigError("InflowProfile: period must be positive");
  InflowProfile p;
  p.tabulated_ = false;
  p.period_ = period;
  p.a0_ = a0;
  p.a_ = std::move(a);
  p.b_ = std::move(b);
  return p;
}

InflowProfile InflowProfile::from_csv(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("InflowProfile: cannot open " + path.string());
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  double period = 0.0;
  std::vector<double> t, Q;
  while (std::getline(in, line)) {
    ++line_no;
    std::string s = line;
    while (!s.empty() && (s.back() == '\r' || s.back() == '\n' ||
                          s.back() == ' '))
      s.pop_back();
    if (s.empty())
      continue;
    if (s[0] == '#') {
      const auto eq = s.find('=');
      if (eq != std::string::npos && s.substr(1, eq - 1) == "period")
        period = std::stod(s.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (s != "t,Q")
        throw SchemaError("InflowProfile: expected header 't,Q' in " +
                          path.string());
      header_seen = true;
      continue;
    }
    const auto comma = s.find(',');
    if (comma == std::string::npos)
      throw SchemaError("InflowProfile: bad row at line " +
                        std::to_string(line_no) + " of " + path.string());
    try {
      t.push_back(std::stod(s.substr(0, comma)));
      Q.push_back(std::stod(s.substr(comma + 1)));
    } catch (const std::exception &) {
      throw SchemaError("InflowProfile: bad number at line " +
                        std::to_string(line_no) + " of " + path.string());
    }
  }
  if (t.size() < 2)
    throw SchemaError("InflowProfile: too few samples in " + path.string());
  if (period == 0.0)
    period = t.back() - t.front();
  return tabulated(std::move(t), std::move(Q), period);
}

double InflowProfile::flow(double t) const {
  if (tabulated_) {
    double y = std::fmod(t - t0_, period_);
    if (y < 0.0)
      y += period_;
    return interp_(t0_ + y);
  }
  double q = a0_;
  const double w = 2.0 * std::numbers::pi / period_;
  for (std::size_t k = 0; k < a_.size(); ++k)
    q += a_[k] * std::cos(w * (k + 1) * t);
  for (std::size_t k = 0; k < b_.size(); ++k)
    q += b_[k] * std::sin(w * (k + 1) * t);
  return q;
}

} // namespace hemoflow
