#include "asnn/network.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace asnn {

std::uint64_t StepCounters::total_spikes() const {
  return std::accumulate(spikes_per_layer.begin(), spikes_per_layer.end(),
                         std::uint64_t{0});
}

void StepCounters::accumulate(const StepCounters& other) {
  if (spikes_per_layer.size() < other.spikes_per_layer.size())
    spikes_per_layer.resize(other.spikes_per_layer.size(), 0);
  for (std::size_t i = 0; i < other.spikes_per_layer.size(); ++i)
    spikes_per_layer[i] += other.spikes_per_layer[i];
  network_multiplications += other.network_multiplications;
  neuron_updates += other.neuron_updates;
}

AsnnNetwork AsnnNetwork::from_ann(const NetworkSpec& net, const AsnParams& params,
                                  double readout_tau) {
  net.validate();
  params.validate();
  if (!(readout_tau > 0.0)) throw std::invalid_argument("readout_tau must be > 0");

  AsnnNetwork a;
  a.spec_ = net;
  a.shapes_ = net.shape_chain();
  a.readout_tau_ = readout_tau;
  a.readout_decay_ = std::exp(-params.dt / readout_tau);

  for (const Shape& s : a.shapes_) a.layer_sizes_.push_back(s.size());
  const std::size_t L = a.layer_sizes_.size();
  a.states_.resize(L);
  a.bias_current_.resize(L);
  a.params_.assign(L, params);
  for (std::size_t l = 0; l < L; ++l) {
    a.states_[l].assign(a.layer_sizes_[l], AsnState{});
    a.bias_current_[l].assign(a.layer_sizes_[l], 0.0);
    a.coeffs_.push_back(AsnCoeffs::make(params));
  }
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const std::size_t l = i + 1;  // runtime layer fed by spec layer i
    const auto& spec = net.layers[i].layer;
    if (const auto* d = std::get_if<DenseLayer>(&spec)) {
      a.bias_current_[l] = d->bias;
    } else if (const auto* c = std::get_if<ConvLayer>(&spec)) {
      const Shape out = a.shapes_[l];
      for (int n = 0; n < c->n; ++n)
        for (int p = 0; p < out.h * out.w; ++p)
          a.bias_current_[l][static_cast<std::size_t>(n) * out.h * out.w + p] = c->bias[n];
    } else if (const auto* o = std::get_if<OutputLayer>(&spec)) {
      a.bias_current_[l] = o->dense.bias;
    }
  }
  a.readout_.assign(a.layer_sizes_.back(), 0.0);
  return a;
}

void AsnnNetwork::set_layer_params(std::size_t spiking_layer, const AsnParams& p) {
  if (spiking_layer >= spiking_layer_count())
    throw std::out_of_range("set_layer_params: no such spiking layer");
  p.validate();
  if (p.dt != params_[0].dt)
    throw std::invalid_argument("set_layer_params: dt must match the network dt");
  params_[spiking_layer] = p;
  coeffs_[spiking_layer] = AsnCoeffs::make(p);
}

void AsnnNetwork::reset() {
  for (auto& layer : states_)
    for (AsnState& s : layer) s = AsnState{};
  std::fill(readout_.begin(), readout_.end(), 0.0);
  now_ = 0.0;
}

void AsnnNetwork::deliver(std::size_t target_layer, int source_index, double pulse,
                          StepCounters& counters) {
  const auto& spec = spec_.layers[target_layer - 1].layer;
  auto& target = states_[target_layer];
  if (const auto* dp = std::get_if<DenseLayer>(&spec)) {
    for (int j = 0; j < dp->out; ++j)
      target[j].i_in += dp->weights[static_cast<std::size_t>(j) * dp->in + source_index] * pulse;
    counters.network_multiplications += dp->out;
  } else if (const auto* op = std::get_if<OutputLayer>(&spec)) {
    const DenseLayer& d = op->dense;
    for (int j = 0; j < d.out; ++j)
      target[j].i_in += d.weights[static_cast<std::size_t>(j) * d.in + source_index] * pulse;
    counters.network_multiplications += d.out;
  } else if (const auto* c = std::get_if<ConvLayer>(&spec)) {
    const Shape in = shapes_[target_layer - 1];
    const Shape out = shapes_[target_layer];
    const int ch = source_index / (in.h * in.w);
    const int y = (source_index / in.w) % in.h;
    const int x = source_index % in.w;
    for (int n = 0; n < c->n; ++n)
      for (int ky = 0; ky < c->k; ++ky) {
        const int oy = y - ky;
        if (oy < 0 || oy >= out.h) continue;
        for (int kx = 0; kx < c->k; ++kx) {
          const int ox = x - kx;
          if (ox < 0 || ox >= out.w) continue;
          target[(static_cast<std::size_t>(n) * out.h + oy) * out.w + ox].i_in +=
              c->kernels[((static_cast<std::size_t>(n) * c->c + ch) * c->k + ky) * c->k + kx] *
              pulse;
          ++counters.network_multiplications;
        }
      }
  } else {
    const auto& p = std::get<AvgPoolLayer>(spec);
    const Shape in = shapes_[target_layer - 1];
    const Shape out = shapes_[target_layer];
    const int ch = source_index / (in.h * in.w);
    const int y = (source_index / in.w) % in.h;
    const int x = source_index % in.w;
    target[(static_cast<std::size_t>(ch) * out.h + y / p.window) * out.w + x / p.window]
        .i_in += pulse / (p.window * p.window);
    ++counters.network_multiplications;
  }
}

StepCounters AsnnNetwork::tick(std::span<const double> frame) {
  const std::size_t L = layer_sizes_.size();
  if (static_cast<int>(frame.size()) != layer_sizes_[0])
    throw std::runtime_error("tick: frame size " + std::to_string(frame.size()) +
                             " does not match input layer size " +
                             std::to_string(layer_sizes_[0]));
  now_ += params_[0].dt;
  StepCounters counters;
  counters.spikes_per_layer.assign(L, 0);

  for (std::size_t l = 0; l < L; ++l)
    for (AsnState& s : states_[l]) neuron_decay(s, coeffs_[l]);

  for (std::size_t l = 0; l + 1 < L; ++l) {
    auto& layer = states_[l];
    for (int i = 0; i < static_cast<int>(layer.size()); ++i) {
      const double ext = (l == 0) ? frame[i] : bias_current_[l][i];
      std::optional<SpikeEvent> ev;
      try {
        ev = neuron_fire(layer[i], ext, params_[l], coeffs_[l], now_, i);
      } catch (const std::exception& e) {
        throw std::runtime_error("layer " + std::to_string(l) + ": " + e.what());
      }
      ++counters.neuron_updates;
      if (ev) {
        ++counters.spikes_per_layer[l];
        deliver(l + 1, i, ev->pulse, counters);
      }
    }
  }

  // Output layer: non-spiking integrators, tau_rout smoothing on I(t).
  const std::size_t out = L - 1;
  for (std::size_t i = 0; i < states_[out].size(); ++i) {
    AsnState& s = states_[out][i];
    const double current = s.i_in + bias_current_[out][i];
    if (!std::isfinite(current))
      throw std::runtime_error("layer " + std::to_string(out) + ": non-finite current at neuron " +
                               std::to_string(i));
    readout_[i] = readout_[i] * readout_decay_ + (1.0 - readout_decay_) * current;
    ++counters.neuron_updates;
    if (spiking_readout_) {
      auto ev = neuron_fire(s, bias_current_[out][i], params_[out], coeffs_[out], now_,
                            static_cast<int>(i));
      if (ev) ++counters.spikes_per_layer[out];
    }
  }
  return counters;
}

int AsnnNetwork::predict() const {
  int best = 0;
  for (int i = 1; i < static_cast<int>(readout_.size()); ++i)
    if (readout_[i] > readout_[best]) best = i;
  return best;
}

RunTrace AsnnNetwork::run_classification(std::span<const double> sample, int duration_ms) {
  if (duration_ms < 1) throw std::invalid_argument("run_classification: duration must be >= 1ms");
  reset();
  RunTrace trace;
  const int steps = static_cast<int>(std::lround(duration_ms / params_[0].dt));
  for (int t = 0; t < steps; ++t) {
    StepCounters c = tick(sample);
    trace.scores.push_back(readout_);
    trace.predictions.push_back(predict());
    trace.layer_spikes.push_back(c.spikes_per_layer);
    trace.totals.accumulate(c);
  }
  return trace;
}

int AsnnNetwork::spiking_neuron_count() const {
  int n = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) n += layer_sizes_[l];
  return n;
}

std::uint64_t AsnnNetwork::connection_count() const {
  std::uint64_t c = 0;
  for (std::size_t i = 0; i < spec_.layers.size(); ++i) {
    const auto& l = spec_.layers[i].layer;
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      c += static_cast<std::uint64_t>(d->in) * d->out;
    } else if (const auto* o = std::get_if<OutputLayer>(&l)) {
      c += static_cast<std::uint64_t>(o->dense.in) * o->dense.out;
    } else if (const auto* cv = std::get_if<ConvLayer>(&l)) {
      const Shape out = shapes_[i + 1];
      c += static_cast<std::uint64_t>(out.h) * out.w * cv->n * cv->c * cv->k * cv->k;
    } else {
      c += static_cast<std::uint64_t>(shapes_[i].size());  // pool: one edge per input
    }
  }
  return c;
}

double AsnnNetwork::firing_rate_hz(const RunTrace& trace, int spiking_neurons,
                                   int window_ms) {
  if (trace.layer_spikes.empty() || spiking_neurons <= 0 || window_ms <= 0) return 0.0;
  const std::size_t n = trace.layer_spikes.size();
  const std::size_t first = n > static_cast<std::size_t>(window_ms) ? n - window_ms : 0;
  std::uint64_t spikes = 0;
  for (std::size_t t = first; t < n; ++t) {
    const auto& per_layer = trace.layer_spikes[t];
    for (std::size_t l = 0; l + 1 < per_layer.size(); ++l) spikes += per_layer[l];
  }
  const double window_s = static_cast<double>(n - first) / 1000.0;
  return static_cast<double>(spikes) / (spiking_neurons * window_s);
}

}  // namespace asnn
