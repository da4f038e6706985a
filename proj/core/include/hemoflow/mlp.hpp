#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hemoflow/errors.hpp"

namespace hemoflow {

/// Fully connected tanh network mapping (x, t) to (A, u, p), with a
/// softplus transform on the area head so that A > 0 for every input.
/// Parameters are stored flat (per layer: row-major weights, then biases)
/// so the optimizer can treat the network as one parameter vector.
struct MLPNet {
  std::vector<int> sizes;     ///< e.g. {2, 32, 32, 32, 3}
  std::vector<double> params; ///< flat weights and biases
  bool softplus_area_head = true;

  std::vector<std::size_t> w_off, b_off;

  static MLPNet make(std::vector<int> sizes, std::uint64_t seed,
                     bool softplus_area_head = true);

  int n_layers() const { return static_cast<int>(sizes.size()) - 1; }
  std::size_t n_params() const { return params.size(); }
  const double *W(int layer) const { return params.data() + w_off[layer]; }
  const double *b(int layer) const { return params.data() + b_off[layer]; }
  double *W(int layer) { return params.data() + w_off[layer]; }
  double *b(int layer) { return params.data() + b_off[layer]; }

  void compute_offsets();
  void validate() const;
};

/// Learnable inverse parameters, stored as logarithms of the scaled
/// quantities so the effective values stay strictly positive.
struct InverseParams {
  double log_tau_r = 0.0;
  double log_E0 = 0.0;

  double tau_r() const { return std::exp(log_tau_r); }
  double E0() const { return std::exp(log_E0); }

  static InverseParams from_values(double tau_r, double E0) {
    if (!(tau_r > 0.0) || !(E0 > 0.0))
      throw DomainError("InverseParams: values must be positive");
    return {std::log(tau_r), std::log(E0)};
  }
};

/// Network outputs and their first derivatives with respect to the inputs.
struct NetOutputs {
  double A = 0, u = 0, p = 0;
  double A_x = 0, A_t = 0;
  double u_x = 0, u_t = 0;
  double p_x = 0, p_t = 0;
};

/// Adjoints (d loss / d output) matching NetOutputs.
struct NetAdjoints {
  double A = 0, u = 0, p = 0;
  double A_x = 0, A_t = 0;
  double u_x = 0, u_t = 0;
  double p_x = 0, p_t = 0;
};

/// Record of one augmented forward sweep. Nodes are the network layers in
/// evaluation order; each stores the primal activations and the two
/// input-tangent channels, plus reusable adjoint buffers for the reverse
/// sweep (visited exactly once, in reverse order).
class Tape {
public:
  void prepare(const MLPNet &net);

  // forward records, indexed by layer
  std::vector<std::vector<double>> h, hx, ht; ///< activations + tangents
  std::vector<std::vector<double>> ax, at;    ///< pre-activation tangents
  std::vector<double> y, yx, yt;              ///< final linear outputs

  // adjoint accumulation buffers (ping-pong between layers)
  std::vector<double> bh, bhx, bht, ba, bax, bat;

  bool prepared_for(const MLPNet &net) const;

private:
  std::vector<int> sizes_;
};

/// Augmented forward pass: primal outputs plus d/dx and d/dt, propagated
/// as forward-mode tangents. Records the sweep on the tape.
NetOutputs mlp_forward(const MLPNet &net, double x, double t, Tape &tape);

/// Reverse sweep over a recorded tape: accumulates d(sum of adjoint-weighted
/// outputs)/d(params) into grad (same layout as net.params).
void mlp_backward(const MLPNet &net, Tape &tape, const NetAdjoints &adj,
                  double *grad);

/// Value-only fast path (no input tangents) for points whose loss terms use
/// only the primal outputs.
void mlp_value(const MLPNet &net, double x, double t, Tape &tape,
               double out[3]);
void mlp_value_backward(const MLPNet &net, Tape &tape,
                        const double bar_out[3], double *grad);

/// Plain forward evaluation without any tape (prediction path).
void mlp_eval(const MLPNet &net, double x, double t, double out[3]);

double softplus(double y);
double sigmoid(double y);

} // namespace hemoflow
