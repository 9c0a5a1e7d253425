#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asnn {

// Least-squares approximation of the ISI correction factor, nu(isi) ~ a + b*isi.
struct NuLinearFit {
  double a = 0.5;
  double b = 0.0;
  double residual = 0.0;  // sum of squared residuals over the fitting grid
};

enum class NuMode { Exact, LinearFit };

// Coding parameters of an adaptive spiking neuron. Times are in ms,
// thresholds in the same units as the encoded signal.
struct AsnParams {
  double theta0 = 0.1;     // baseline threshold
  double m_f = 0.01;       // multiplicative adaptation factor
  double tau_kappa = 50.0; // refractory / PSC decay
  double tau_gamma = 15.0; // threshold decay
  double tau_smooth = 2.5; // activation smoothing
  double dt = 1.0;         // simulation step
  NuMode nu_mode = NuMode::Exact;
  NuLinearFit nu_fit;      // used when nu_mode == LinearFit

  // Throws std::invalid_argument on bad values. Returns true when dt exceeds
  // the smallest time constant (a warning condition, not an error).
  bool validate() const;
};

// Per-neuron dynamical state. Four scalar accumulators plus the last spike
// time; no spike history is kept.
struct AsnState {
  double s = 0.0;           // smoothed activation S(t)
  double s_hat = 0.0;       // signal approximation, decays with tau_kappa
  double theta_adapt = 0.0; // adaptive threshold component, decays with tau_gamma
  double i_in = 0.0;        // accumulated spike-driven input current, decays with tau_kappa
  std::optional<double> last_spike_time;

  bool finite() const;
};

// A pulse with an analog height. `pulse` carries height * nu(ISI) so the
// receiver needs no knowledge of the sender's spike history.
struct SpikeEvent {
  double time = 0.0;
  int source = 0;
  double height = 0.0;
  double pulse = 0.0;
};

// Precomputed per-step decay factors for one (params, dt) pair.
struct AsnCoeffs {
  double decay_kappa = 0.0;
  double decay_gamma = 0.0;
  double decay_smooth = 0.0;
  double isi_cap = 0.0; // ISI surrogate for a neuron's first spike

  static AsnCoeffs make(const AsnParams& p);
};

// ISI correction factor: makes the mean of an eta kernel over the interval
// equal to half the spike height. Exact mode evaluates the closed form
// isi / (2 * tau_kappa * (1 - exp(-isi / tau_kappa))); LinearFit mode
// evaluates a + b*isi, clamped below at 0.5.
double nu_factor(double isi, const AsnParams& params);

// Ordinary least squares y ~ a + b*x.
NuLinearFit fit_linear_xy(const std::vector<double>& xs, const std::vector<double>& ys);

// Fits nu(isi) over `isi_grid` by least squares against the exact closed
// form. Requires at least two distinct positive grid points.
NuLinearFit fit_nu_linear(double tau_kappa, const std::vector<double>& isi_grid);

// Phase 1 of a step: exponential decay of the accumulators. Split out so a
// network tick can decay every layer before any same-step spike delivery.
void neuron_decay(AsnState& state, const AsnCoeffs& coeffs);

// Phase 2: integrate the step's current, smooth, test the threshold.
// Spikes delivered between the phases sit undecayed in i_in, as a fresh
// kappa kernel should.
std::optional<SpikeEvent> neuron_fire(AsnState& state, double external_current,
                                      const AsnParams& params, const AsnCoeffs& coeffs,
                                      double now_ms, int neuron_id = 0);

// Advances one neuron by dt. `external_current` is the current injected this
// step (input drive or bias); it contributes to I(t) for the duration of the
// step but is not itself subject to kappa decay.
// Update order: decay, input, smoothing, threshold test. At most one spike
// per step.
std::optional<SpikeEvent> neuron_step(AsnState& state, double external_current,
                                      const AsnParams& params, const AsnCoeffs& coeffs,
                                      double now_ms, int neuron_id = 0);

std::optional<SpikeEvent> neuron_step(AsnState& state, double external_current,
                                      const AsnParams& params, double now_ms,
                                      int neuron_id = 0);

// Accumulates a presynaptic spike into the receiver's current.
inline void deliver_spike(AsnState& state, double weight, const SpikeEvent& spike) {
  state.i_in += weight * spike.pulse;
}

}  // namespace asnn
