#include "hemoflow/mlp.hpp"

#include <cmath>
#include <random>

namespace hemoflow {

double softplus(double y) {
  return std::max(y, 0.0) + std::log1p(std::exp(-std::abs(y)));
}

double sigmoid(double y) {
  if (y >= 0.0) {
    const double e = std::exp(-y);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(y);
  return e / (1.0 + e);
}

namespace {

// Platform-independent uniform double in [0, 1) from raw 64-bit draws.
double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

void MLPNet::compute_offsets() {
  const int L = n_layers();
  w_off.resize(L);
  b_off.resize(L);
  std::size_t off = 0;
  for (int l = 0; l < L; ++l) {
    w_off[l] = off;
    off += static_cast<std::size_t>(sizes[l + 1]) * sizes[l];
    b_off[l] = off;
    off += sizes[l + 1];
  }
  params.resize(off);
}

void MLPNet::validate() const {
  if (sizes.size() < 2)
    throw ConfigError("MLPNet: needs at least one layer");
  for (int s : sizes)
    if (s <= 0)
      throw ConfigError("MLPNet: layer sizes must be positive");
  std::size_t expect = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    expect += static_cast<std::size_t>(sizes[l + 1]) * sizes[l] + sizes[l + 1];
  if (params.size() != expect)
    throw ConfigError("MLPNet: parameter vector size mismatch");
  for (double v : params)
    if (!std::isfinite(v))
      throw ConfigError("MLPNet: non-finite parameter");
}

MLPNet MLPNet::make(std::vector<int> sizes, std::uint64_t seed,
                    bool softplus_area_head) {
  MLPNet net;
  net.sizes = std::move(sizes);
  net.softplus_area_head = softplus_area_head;
  if (net.sizes.size() < 2)
    throw ConfigError("MLPNet: needs at least one layer");
  net.compute_offsets();

  std::mt19937_64 rng(seed);
  for (int l = 0; l < net.n_layers(); ++l) {
    const int fan_in = net.sizes[l];
    const int fan_out = net.sizes[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    double *W = net.W(l);
    for (int k = 0; k < fan_out * fan_in; ++k)
      W[k] = (2.0 * uniform01(rng) - 1.0) * limit;
    double *b = net.b(l);
    for (int k = 0; k < fan_out; ++k)
      b[k] = 0.0;
  }
  return net;
}

void Tape::prepare(const MLPNet &net) {
  sizes_ = net.sizes;
  const int L = net.n_layers();
  h.assign(L, {});
  hx.assign(L, {});
  ht.assign(L, {});
  ax.assign(L, {});
  at.assign(L, {});
  // index 0 holds the inputs; hidden layers at 1..L-1
  int max_w = 0;
  for (int l = 0; l < L; ++l) {
    const int nl = l == 0 ? net.sizes[0] : net.sizes[l];
    h[l].resize(nl);
    hx[l].resize(nl);
    ht[l].resize(nl);
    ax[l].resize(nl);
    at[l].resize(nl);
    max_w = std::max(max_w, nl);
  }
  max_w = std::max(max_w, net.sizes.back());
  y.resize(net.sizes.back());
  yx.resize(net.sizes.back());
  yt.resize(net.sizes.back());
  bh.resize(max_w);
  bhx.resize(max_w);
  bht.resize(max_w);
  ba.resize(max_w);
  bax.resize(max_w);
  bat.resize(max_w);
}

bool Tape::prepared_for(const MLPNet &net) const {
  return sizes_ == net.sizes;
}

NetOutputs mlp_forward(const MLPNet &net, double x, double t, Tape &tape) {
  if (!tape.prepared_for(net))
    tape.prepare(net);
  const int L = net.n_layers();

  tape.h[0][0] = x;
  tape.h[0][1] = t;
  tape.hx[0][0] = 1.0;
  tape.hx[0][1] = 0.0;
  tape.ht[0][0] = 0.0;
  tape.ht[0][1] = 1.0;

  for (int l = 1; l <= L; ++l) {
    const int nin = net.sizes[l - 1];
    const int nout = net.sizes[l];
    const double *W = net.W(l - 1);
    const double *b = net.b(l - 1);
    const double *hp = tape.h[l - 1].data();
    const double *hpx = tape.hx[l - 1].data();
    const double *hpt = tape.ht[l - 1].data();

    double *av, *avx, *avt;
    if (l < L) {
      av = tape.h[l].data(); // reused: pre-activation, then overwritten
      avx = tape.ax[l].data();
      avt = tape.at[l].data();
    } else {
      av = tape.y.data();
      avx = tape.yx.data();
      avt = tape.yt.data();
    }

    for (int i = 0; i < nout; ++i) {
      const double *row = W + static_cast<std::size_t>(i) * nin;
      double s = b[i], sx = 0.0, st = 0.0;
      for (int j = 0; j < nin; ++j) {
        s += row[j] * hp[j];
        sx += row[j] * hpx[j];
        st += row[j] * hpt[j];
      }
      av[i] = s;
      avx[i] = sx;
      avt[i] = st;
    }

    if (l < L) {
      double *hv = tape.h[l].data();
      double *hvx = tape.hx[l].data();
      double *hvt = tape.ht[l].data();
      for (int i = 0; i < nout; ++i) {
        const double th = std::tanh(hv[i]);
        const double sp = 1.0 - th * th;
        hv[i] = th;
        hvx[i] = sp * avx[i];
        hvt[i] = sp * avt[i];
      }
    }
  }

  NetOutputs o;
  const int nout = net.sizes.back();
  if (net.softplus_area_head && nout == 3) {
    const double s = sigmoid(tape.y[0]);
    o.A = softplus(tape.y[0]);
    o.A_x = s * tape.yx[0];
    o.A_t = s * tape.yt[0];
  } else {
    o.A = tape.y[0];
    o.A_x = tape.yx[0];
    o.A_t = tape.yt[0];
  }
  if (nout >= 2) {
    o.u = tape.y[1];
    o.u_x = tape.yx[1];
    o.u_t = tape.yt[1];
  }
  if (nout >= 3) {
    o.p = tape.y[2];
    o.p_x = tape.yx[2];
    o.p_t = tape.yt[2];
  }
  return o;
}

void mlp_backward(const MLPNet &net, Tape &tape, const NetAdjoints &adj,
                  double *grad) {
  const int L = net.n_layers();
  const int nout = net.sizes.back();

  // Head adjoints -> adjoints on the final linear outputs.
  Tape &tp = tape;
  double *by = tp.bh.data();
  double *byx = tp.bhx.data();
  double *byt = tp.bht.data();
  for (int i = 0; i < nout; ++i)
    by[i] = byx[i] = byt[i] = 0.0;

  if (net.softplus_area_head && nout == 3) {
    const double s = sigmoid(tape.y[0]);
    const double sp = s * (1.0 - s);
    by[0] = adj.A * s + (adj.A_x * tape.yx[0] + adj.A_t * tape.yt[0]) * sp;
    byx[0] = adj.A_x * s;
    byt[0] = adj.A_t * s;
  } else {
    by[0] = adj.A;
    byx[0] = adj.A_x;
    byt[0] = adj.A_t;
  }
  if (nout >= 2) {
    by[1] = adj.u;
    byx[1] = adj.u_x;
    byt[1] = adj.u_t;
  }
  if (nout >= 3) {
    by[2] = adj.p;
    byx[2] = adj.p_x;
    byt[2] = adj.p_t;
  }

  // Walk the layers in reverse. At entry to iteration l the buffers
  // (bh, bhx, bht) hold adjoints of layer l's outputs (post-activation for
  // hidden layers, linear outputs for the last).
  for (int l = L; l >= 1; --l) {
    const int nin = net.sizes[l - 1];
    const int nl = net.sizes[l];
    const double *W = net.W(l - 1);
    double *gW = grad + net.w_off[l - 1];
    double *gb = grad + net.b_off[l - 1];

    double *ba = tp.ba.data();
    double *bax = tp.bax.data();
    double *bat = tp.bat.data();

    if (l < L) {
      // tanh: h = tanh(a), hd = (1 - h^2) ad
      const double *hv = tape.h[l].data();
      const double *axv = tape.ax[l].data();
      const double *atv = tape.at[l].data();
      for (int i = 0; i < nl; ++i) {
        const double th = hv[i];
        const double sp = 1.0 - th * th;
        const double spp = -2.0 * th * sp;
        ba[i] = tp.bh[i] * sp +
                (tp.bhx[i] * axv[i] + tp.bht[i] * atv[i]) * spp;
        bax[i] = tp.bhx[i] * sp;
        bat[i] = tp.bht[i] * sp;
      }
    } else {
      for (int i = 0; i < nl; ++i) {
        ba[i] = tp.bh[i];
        bax[i] = tp.bhx[i];
        bat[i] = tp.bht[i];
      }
    }

    const double *hp = tape.h[l - 1].data();
    const double *hpx = tape.hx[l - 1].data();
    const double *hpt = tape.ht[l - 1].data();

    for (int i = 0; i < nl; ++i) {
      double *grow = gW + static_cast<std::size_t>(i) * nin;
      const double bai = ba[i], baxi = bax[i], bati = bat[i];
      for (int j = 0; j < nin; ++j)
        grow[j] += bai * hp[j] + baxi * hpx[j] + bati * hpt[j];
      gb[i] += bai;
    }

    if (l > 1) {
      for (int j = 0; j < nin; ++j) {
        double s = 0.0, sx = 0.0, st = 0.0;
        for (int i = 0; i < nl; ++i) {
          const double w = W[static_cast<std::size_t>(i) * nin + j];
          s += w * ba[i];
          sx += w * bax[i];
          st += w * bat[i];
        }
        tp.bh[j] = s;
        tp.bhx[j] = sx;
        tp.bht[j] = st;
      }
    }
  }
}

void mlp_value(const MLPNet &net, double x, double t, Tape &tape,
               double out[3]) {
  if (!tape.prepared_for(net))
    tape.prepare(net);
  const int L = net.n_layers();
  tape.h[0][0] = x;
  tape.h[0][1] = t;
  for (int l = 1; l <= L; ++l) {
    const int nin = net.sizes[l - 1];
    const int nout = net.sizes[l];
    const double *W = net.W(l - 1);
    const double *b = net.b(l - 1);
    const double *hp = tape.h[l - 1].data();
    double *av = l < L ? tape.h[l].data() : tape.y.data();
    for (int i = 0; i < nout; ++i) {
      const double *row = W + static_cast<std::size_t>(i) * nin;
      double s = b[i];
      for (int j = 0; j < nin; ++j)
        s += row[j] * hp[j];
      av[i] = s;
    }
    if (l < L)
      for (int i = 0; i < nout; ++i)
        av[i] = std::tanh(av[i]);
  }
  const int nout = net.sizes.back();
  out[0] = (net.softplus_area_head && nout == 3) ? softplus(tape.y[0])
                                                 : tape.y[0];
  out[1] = nout >= 2 ? tape.y[1] : 0.0;
  out[2] = nout >= 3 ? tape.y[2] : 0.0;
}

void mlp_value_backward(const MLPNet &net, Tape &tape,
                        const double bar_out[3], double *grad) {
  const int L = net.n_layers();
  const int nout = net.sizes.back();
  Tape &tp = tape;
  double *bh = tp.bh.data();
  for (int i = 0; i < nout; ++i)
    bh[i] = bar_out[i];
  if (net.softplus_area_head && nout == 3)
    bh[0] = bar_out[0] * sigmoid(tape.y[0]);

  for (int l = L; l >= 1; --l) {
    const int nin = net.sizes[l - 1];
    const int nl = net.sizes[l];
    const double *W = net.W(l - 1);
    double *gW = grad + net.w_off[l - 1];
    double *gb = grad + net.b_off[l - 1];
    double *ba = tp.ba.data();

    if (l < L) {
      const double *hv = tape.h[l].data();
      for (int i = 0; i < nl; ++i)
        ba[i] = bh[i] * (1.0 - hv[i] * hv[i]);
    } else {
      for (int i = 0; i < nl; ++i)
        ba[i] = bh[i];
    }

    const double *hp = tape.h[l - 1].data();
    for (int i = 0; i < nl; ++i) {
      double *grow = gW + static_cast<std::size_t>(i) * nin;
      for (int j = 0; j < nin; ++j)
        grow[j] += ba[i] * hp[j];
      gb[i] += ba[i];
    }
    if (l > 1) {
      for (int j = 0; j < nin; ++j) {
        double s = 0.0;
        for (int i = 0; i < nl; ++i)
          s += W[static_cast<std::size_t>(i) * nin + j] * ba[i];
        bh[j] = s;
      }
    }
  }
}

void mlp_eval(const MLPNet &net, double x, double t, double out[3]) {
  thread_local Tape tape;
  mlp_value(net, x, t, tape, out);
}

} // namespace hemoflow
