#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "asnn/ann.hpp"
#include "asnn/asn.hpp"

namespace asnn {

struct StepCounters {
  std::vector<std::uint64_t> spikes_per_layer;
  std::uint64_t network_multiplications = 0;  // sum over spikes of fan-out
  std::uint64_t neuron_updates = 0;

  std::uint64_t total_spikes() const;
  void accumulate(const StepCounters& other);
};

// Time-indexed record of one classification run.
struct RunTrace {
  std::vector<std::vector<double>> scores;              // per ms readout
  std::vector<int> predictions;                         // per ms argmax
  std::vector<std::vector<std::uint64_t>> layer_spikes; // per ms, per layer
  StepCounters totals;
};

// Spiking network built from a NetworkSpec by drop-in neuron substitution.
// Layer 0 encodes the input features; each source layer becomes a spiking
// layer, except the final Output layer which integrates without spiking.
class AsnnNetwork {
 public:
  static AsnnNetwork from_ann(const NetworkSpec& net, const AsnParams& params,
                              double readout_tau = 10.0);

  void set_layer_params(std::size_t spiking_layer, const AsnParams& p);
  void set_spiking_readout(bool on) { spiking_readout_ = on; }

  // Zeroes all neuron state and the clock (cold start).
  void reset();

  // One dt step: decays every layer, then processes layers in topological
  // order with same-step feedforward spike delivery. `frame` is injected as
  // constant current into the input layer.
  StepCounters tick(std::span<const double> frame);

  // tau_rout-smoothed output currents.
  const std::vector<double>& readout() const { return readout_; }
  int predict() const;  // ties break to the lowest class index

  // Resets, injects the sample every tick and records the readout each ms.
  RunTrace run_classification(std::span<const double> sample, int duration_ms);

  const NetworkSpec& source() const { return spec_; }
  std::size_t layer_count() const { return layer_sizes_.size(); }  // spiking + output
  std::size_t spiking_layer_count() const { return layer_sizes_.size() - 1; }
  int layer_size(std::size_t l) const { return layer_sizes_[l]; }
  int spiking_neuron_count() const;
  std::uint64_t connection_count() const;  // fan-in summed over non-input neurons
  double now_ms() const { return now_; }
  double dt() const { return params_[0].dt; }

  const std::vector<AsnState>& layer_states(std::size_t l) const { return states_[l]; }
  const AsnParams& layer_params(std::size_t l) const { return params_[l]; }

  // Average spikes per spiking neuron per second over a window, given the
  // per-ms layer spike counts of a trace.
  static double firing_rate_hz(const RunTrace& trace, int spiking_neurons, int window_ms);

 private:
  AsnnNetwork() = default;
  void deliver(std::size_t target_layer, int source_index, double pulse,
               StepCounters& counters);

  NetworkSpec spec_;
  std::vector<Shape> shapes_;            // activation shape per layer, input first
  std::vector<int> layer_sizes_;         // including input (index 0) and output (last)
  std::vector<std::vector<AsnState>> states_;
  std::vector<std::vector<double>> bias_current_;  // constant injected current per layer
  std::vector<AsnParams> params_;        // per layer
  std::vector<AsnCoeffs> coeffs_;
  double readout_tau_ = 10.0;
  double readout_decay_ = 0.0;
  std::vector<double> readout_;
  double now_ = 0.0;
  bool spiking_readout_ = false;
};

}  // namespace asnn
