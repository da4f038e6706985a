#include <doctest.h>

#include <cmath>
#include <random>

#include "hemoflow/adam.hpp"
#include "hemoflow/mlp.hpp"
#include "support/oracles.hpp"

using namespace hemoflow;
using namespace hemoflow::testsupport;

TEST_CASE("zero-weight network: softplus head and vanishing derivatives") {
  MLPNet net = MLPNet::make({2, 32, 32, 32, 3}, 1234);
  for (auto &v : net.params)
    v = 0.0;
  Tape tape;
  const NetOutputs o = mlp_forward(net, 0.37, -0.81, tape);
  CHECK(o.A == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(o.u == 0.0);
  CHECK(o.p == 0.0);
  CHECK(o.A_x == 0.0);
  CHECK(o.A_t == 0.0);
  CHECK(o.u_x == 0.0);
  CHECK(o.u_t == 0.0);
  CHECK(o.p_x == 0.0);
  CHECK(o.p_t == 0.0);
}

TEST_CASE("tiny network matches the symbolic closed form") {
  // 2 -> 2 -> 3 with hand-set weights; everything computable by hand.
  MLPNet net = MLPNet::make({2, 2, 3}, 0);
  const double a = 0.3, b = -0.8, c = 1.1, d = 0.5, e = 0.05, f = -0.4;
  double *W1 = net.W(0);
  W1[0] = a;
  W1[1] = b;
  W1[2] = c;
  W1[3] = d;
  net.b(0)[0] = e;
  net.b(0)[1] = f;
  double *W2 = net.W(1);
  const double w[6] = {0.7, -0.2, 0.4, 0.9, -1.3, 0.6};
  for (int k = 0; k < 6; ++k)
    W2[k] = w[k];
  net.b(1)[0] = 0.1;
  net.b(1)[1] = -0.2;
  net.b(1)[2] = 0.3;

  const double x = 0.45, t = -0.3;
  const double h1 = std::tanh(a * x + b * t + e);
  const double h2 = std::tanh(c * x + d * t + f);
  const double s1 = 1.0 - h1 * h1, s2 = 1.0 - h2 * h2;
  const double y0 = w[0] * h1 + w[1] * h2 + 0.1;
  const double y1 = w[2] * h1 + w[3] * h2 - 0.2;
  const double y2 = w[4] * h1 + w[5] * h2 + 0.3;
  const double y0x = w[0] * s1 * a + w[1] * s2 * c;
  const double y0t = w[0] * s1 * b + w[1] * s2 * d;
  const double y1x = w[2] * s1 * a + w[3] * s2 * c;
  const double y1t = w[2] * s1 * b + w[3] * s2 * d;
  const double y2x = w[4] * s1 * a + w[5] * s2 * c;
  const double y2t = w[4] * s1 * b + w[5] * s2 * d;
  const double sg = sigmoid(y0);

  Tape tape;
  const NetOutputs o = mlp_forward(net, x, t, tape);
  CHECK(o.A == doctest::Approx(softplus(y0)).epsilon(1e-15));
  CHECK(o.u == doctest::Approx(y1).epsilon(1e-15));
  CHECK(o.p == doctest::Approx(y2).epsilon(1e-15));
  CHECK(o.A_x == doctest::Approx(sg * y0x).epsilon(1e-14));
  CHECK(o.A_t == doctest::Approx(sg * y0t).epsilon(1e-14));
  CHECK(o.u_x == doctest::Approx(y1x).epsilon(1e-14));
  CHECK(o.u_t == doctest::Approx(y1t).epsilon(1e-14));
  CHECK(o.p_x == doctest::Approx(y2x).epsilon(1e-14));
  CHECK(o.p_t == doctest::Approx(y2t).epsilon(1e-14));
}

TEST_CASE("input derivatives match central finite differences") {
  std::mt19937_64 rng(99);
  Tape tape;
  for (int rep = 0; rep < 100; ++rep) {
    MLPNet net = random_net(rng, {2, 32, 32, 32, 3});
    const double x = uniform(rng, -1.0, 1.0);
    const double t = uniform(rng, -1.0, 1.0);
    const NetOutputs o = mlp_forward(net, x, t, tape);
    const double h = 1e-5;
    double vp[3], vm[3];
    mlp_value(net, x + h, t, tape, vp);
    mlp_value(net, x - h, t, tape, vm);
    CHECK(rel_err(o.A_x, (vp[0] - vm[0]) / (2 * h), 1e-7) < 1e-6);
    CHECK(rel_err(o.u_x, (vp[1] - vm[1]) / (2 * h), 1e-7) < 1e-6);
    CHECK(rel_err(o.p_x, (vp[2] - vm[2]) / (2 * h), 1e-7) < 1e-6);
    mlp_value(net, x, t + h, tape, vp);
    mlp_value(net, x, t - h, tape, vm);
    CHECK(rel_err(o.A_t, (vp[0] - vm[0]) / (2 * h), 1e-7) < 1e-6);
    CHECK(rel_err(o.u_t, (vp[1] - vm[1]) / (2 * h), 1e-7) < 1e-6);
    CHECK(rel_err(o.p_t, (vp[2] - vm[2]) / (2 * h), 1e-7) < 1e-6);
  }
}

TEST_CASE("primal values of the augmented pass match plain evaluation") {
  std::mt19937_64 rng(31);
  Tape tape;
  for (int rep = 0; rep < 20; ++rep) {
    MLPNet net = random_net(rng, {2, 16, 16, 3});
    const double x = uniform(rng, -1.0, 1.0);
    const double t = uniform(rng, -1.0, 1.0);
    const NetOutputs o = mlp_forward(net, x, t, tape);
    double v[3];
    mlp_value(net, x, t, tape, v);
    CHECK(rel_err(o.A, v[0], 1e-300) < 1e-14);
    CHECK(rel_err(o.u, v[1], 1e-300) < 1e-14);
    CHECK(rel_err(o.p, v[2], 1e-300) < 1e-14);
  }
}

TEST_CASE("parameter gradients of an adjoint-weighted output match FD") {
  std::mt19937_64 rng(7);
  Tape tape;
  for (int rep = 0; rep < 10; ++rep) {
    MLPNet net = random_net(rng, {2, 8, 8, 3});
    const double x = uniform(rng, -1, 1), t = uniform(rng, -1, 1);
    NetAdjoints adj;
    adj.A = uniform(rng, -1, 1);
    adj.u = uniform(rng, -1, 1);
    adj.p = uniform(rng, -1, 1);
    adj.A_x = uniform(rng, -1, 1);
    adj.A_t = uniform(rng, -1, 1);
    adj.u_x = uniform(rng, -1, 1);
    adj.u_t = uniform(rng, -1, 1);
    adj.p_x = uniform(rng, -1, 1);
    adj.p_t = uniform(rng, -1, 1);

    auto scalar = [&]() {
      const NetOutputs o = mlp_forward(net, x, t, tape);
      return adj.A * o.A + adj.u * o.u + adj.p * o.p + adj.A_x * o.A_x +
             adj.A_t * o.A_t + adj.u_x * o.u_x + adj.u_t * o.u_t +
             adj.p_x * o.p_x + adj.p_t * o.p_t;
    };

    std::vector<double> grad(net.n_params(), 0.0);
    mlp_forward(net, x, t, tape);
    mlp_backward(net, tape, adj, grad.data());

    // probe a sample of parameters
    for (int probe = 0; probe < 25; ++probe) {
      const std::size_t k = rng() % net.n_params();
      const double fd = central_fd(scalar, net.params[k], 1e-6);
      CHECK(rel_err(grad[k], fd, 1e-6) < 1e-5);
    }
  }
}

TEST_CASE("softplus head keeps the area positive over random sweeps") {
  std::mt19937_64 rng(55);
  Tape tape;
  for (int rep = 0; rep < 50; ++rep) {
    MLPNet net = random_net(rng, {2, 32, 32, 32, 3});
    for (auto &v : net.params)
      v *= uniform(rng, 0.2, 6.0); // include badly scaled nets
    for (int k = 0; k < 20; ++k) {
      const double x = uniform(rng, -3, 3), t = uniform(rng, -3, 3);
      double v[3];
      mlp_value(net, x, t, tape, v);
      CHECK(v[0] > 0.0);
    }
  }
}

TEST_CASE("initialization is deterministic and seed-dependent") {
  MLPNet a = MLPNet::make({2, 32, 32, 32, 3}, 42);
  MLPNet b = MLPNet::make({2, 32, 32, 32, 3}, 42);
  MLPNet c = MLPNet::make({2, 32, 32, 32, 3}, 43);
  CHECK(a.params == b.params);
  CHECK(a.params != c.params);
  // biases zero
  for (int l = 0; l < a.n_layers(); ++l)
    for (int i = 0; i < a.sizes[l + 1]; ++i)
      CHECK(a.b(l)[i] == 0.0);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  AdamState st(4);
  std::vector<double> p = {1.0, -2.0, 0.5, 3.0};
  const std::vector<double> p0 = p;
  std::vector<double> g(4, 0.0);
  st.step(1e-3, p, g);
  CHECK(st.k == 1);
  for (int i = 0; i < 4; ++i)
    CHECK(p[i] == doctest::Approx(p0[i]).epsilon(1e-15));
}

TEST_CASE("adam: first step matches the bias-corrected closed form") {
  AdamState st(2);
  std::vector<double> p = {0.7, -0.4};
  const std::vector<double> g = {0.3, -2.0};
  const double lr = 1e-3;
  st.step(lr, p, g);
  for (int i = 0; i < 2; ++i) {
    // k=1: mhat = g, vhat = g^2 -> dp = -lr g/(|g| + eps)
    const double expect =
        (i == 0 ? 0.7 : -0.4) - lr * g[i] / (std::abs(g[i]) + st.eps);
    CHECK(p[i] == doctest::Approx(expect).epsilon(1e-14));
  }
}

TEST_CASE("adam: constant gradient approaches the normalized step") {
  AdamState st(1);
  std::vector<double> p = {0.0};
  const std::vector<double> g = {0.37};
  const double lr = 1e-3;
  double prev = p[0];
  double step = 0.0;
  for (int k = 0; k < 1000; ++k) {
    st.step(lr, p, g);
    step = prev - p[0];
    prev = p[0];
  }
  CHECK(step == doctest::Approx(lr).epsilon(0.01));
}

TEST_CASE("adam rejects non-finite gradients") {
  AdamState st(2);
  std::vector<double> p = {0.0, 0.0};
  std::vector<double> g = {1.0, std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(st.step(1e-3, p, g), TrainError);
}
