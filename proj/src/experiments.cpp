#include "asnn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace asnn {

EncodingTrace encode_signal(const std::vector<double>& drive, const AsnParams& params) {
  params.validate();
  const AsnCoeffs coeffs = AsnCoeffs::make(params);
  EncodingTrace trace;
  trace.dt = params.dt;
  trace.s.reserve(drive.size());
  AsnState state;
  double smooth = 0.0;
  for (std::size_t i = 0; i < drive.size(); ++i) {
    const double t = static_cast<double>(i + 1) * params.dt;
    const auto ev = neuron_step(state, drive[i], params, coeffs, t);
    smooth = smooth * coeffs.decay_smooth + (1.0 - coeffs.decay_smooth) * state.s_hat;
    trace.s.push_back(state.s);
    trace.s_hat.push_back(state.s_hat);
    trace.s_hat_smooth.push_back(smooth);
    trace.u.push_back(state.s - state.s_hat);
    trace.theta.push_back(params.theta0 + state.theta_adapt);
    if (ev) {
      trace.spike_times.push_back(ev->time);
      trace.spike_heights.push_back(ev->height);
    }
  }
  return trace;
}

EncodingTrace encode_step_bench(const AsnParams& params, double amplitude, int duration_ms) {
  if (amplitude < 0.0) throw std::invalid_argument("encode_step_bench: amplitude must be >= 0");
  if (duration_ms < 1) throw std::invalid_argument("encode_step_bench: duration must be >= 1ms");
  return encode_signal(std::vector<double>(duration_ms, amplitude), params);
}

namespace {

double mean_of(const std::vector<double>& v, std::size_t first, std::size_t last) {
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += v[i];
  return last > first ? acc / static_cast<double>(last - first) : 0.0;
}

double std_of(const std::vector<double>& v, std::size_t first, std::size_t last) {
  if (last - first < 2) return 0.0;
  const double m = mean_of(v, first, last);
  double acc = 0.0;
  for (std::size_t i = first; i < last; ++i) acc += (v[i] - m) * (v[i] - m);
  return std::sqrt(acc / static_cast<double>(last - first));
}

}  // namespace

std::vector<RatePoint> rate_precision_curve(const AsnParams& base,
                                            const std::vector<double>& s_grid) {
  std::vector<RatePoint> points;
  for (double s : s_grid) {
    if (s < 0.0) throw std::invalid_argument("rate_precision_curve: drive must be >= 0");
    const EncodingTrace trace = encode_step_bench(base, s, 2000);
    RatePoint p;
    p.s = s;
    for (double t : trace.spike_times)
      if (t > 1000.0) p.rate_hz += 1.0;
    p.mean_s_hat = mean_of(trace.s_hat_smooth, 1000, 2000);
    p.std_s_hat = std_of(trace.s_hat_smooth, 1000, 2000);
    points.push_back(p);
  }
  return points;
}

namespace {

struct StepRun {
  double rate_hz = 0.0;
  double sse = 0.0;
  double responsiveness_ms = 0.0;
};

StepRun run_step(double tau_kappa, double theta0, double m_f, double amplitude) {
  AsnParams p;
  p.theta0 = theta0;
  p.m_f = m_f;
  p.tau_kappa = tau_kappa;
  const int onset = 200, offset = 1200;
  const int tail = std::max(1000, static_cast<int>(8.0 * tau_kappa));
  std::vector<double> drive(offset + tail, 0.0);
  std::fill(drive.begin() + onset, drive.begin() + offset, amplitude);
  const EncodingTrace trace = encode_signal(drive, p);

  StepRun run;
  for (double t : trace.spike_times)
    if (t > onset && t <= offset) run.rate_hz += 1.0;
  for (int i = onset; i < offset; ++i) {
    const double e = trace.s_hat_smooth[i] - amplitude;
    run.sse += e * e;
  }
  run.responsiveness_ms = tail;
  for (int i = offset; i < static_cast<int>(drive.size()); ++i)
    if (trace.s_hat_smooth[i] < 0.05) {
      run.responsiveness_ms = i - offset + 1;
      break;
    }
  return run;
}

}  // namespace

std::vector<TauPoint> tau_kappa_sweep(const std::vector<double>& taus,
                                      double target_rate_hz, double theta0,
                                      double amplitude) {
  std::vector<TauPoint> points;
  for (double tau : taus) {
    if (!(tau > 0.0)) throw std::invalid_argument("tau_kappa_sweep: taus must be > 0");
    // rate decreases with m_f: bisect on a log grid for the target
    double lo = 1e-6, hi = 100.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(lo * hi);
      if (run_step(tau, theta0, mid, amplitude).rate_hz > target_rate_hz)
        lo = mid;
      else
        hi = mid;
    }
    TauPoint pt;
    pt.tau_kappa = tau;
    pt.m_f = std::sqrt(lo * hi);
    const StepRun run = run_step(tau, theta0, pt.m_f, amplitude);
    pt.rate_hz = run.rate_hz;
    pt.sse = run.sse;
    pt.responsiveness_ms = run.responsiveness_ms;
    points.push_back(pt);
  }
  return points;
}

MatchReport match_metrics(const std::vector<double>& perf_curve, double ann_accuracy,
                          const std::vector<double>& fr_per_ms_hz, int window_ms) {
  if (window_ms < 1) throw std::invalid_argument("match_metrics: window must be >= 1ms");
  MatchReport report;
  report.perf_curve = perf_curve;
  if (perf_curve.empty()) return report;

  const double bound = 1.01 * (1.0 - ann_accuracy);
  const std::size_t n = perf_curve.size();
  // suffix means of the error curve
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + (1.0 - perf_curve[i]);
  std::size_t mt_idx = n;
  for (std::size_t t = 0; t < n; ++t) {
    const double err = 1.0 - perf_curve[t];
    const double tail_mean = suffix[t] / static_cast<double>(n - t);
    if (err <= bound && tail_mean <= bound) {
      mt_idx = t;
      break;
    }
  }
  if (mt_idx < n) {
    report.matching_time_ms = static_cast<double>(mt_idx + 1);
    report.stable = true;
    const double m = suffix[mt_idx] / static_cast<double>(n - mt_idx);
    double acc = 0.0;
    for (std::size_t i = mt_idx; i < n; ++i) {
      const double d = (1.0 - perf_curve[i]) - m;
      acc += d * d;
    }
    report.error_variance = acc / static_cast<double>(n - mt_idx);
  }
  if (!fr_per_ms_hz.empty()) {
    const std::size_t f = fr_per_ms_hz.size() > static_cast<std::size_t>(window_ms)
                              ? fr_per_ms_hz.size() - window_ms
                              : 0;
    report.matching_firing_rate_hz = mean_of(fr_per_ms_hz, f, fr_per_ms_hz.size());
  }
  return report;
}

ClassificationBench dataset_bench(AsnnNetwork& net,
                                  const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int duration_ms) {
  if (features.size() != labels.size() || features.empty())
    throw std::invalid_argument("dataset_bench: features/labels mismatch or empty");
  ClassificationBench bench;
  bench.perf_curve.assign(duration_ms, 0.0);
  bench.fr_per_ms_hz.assign(duration_ms, 0.0);
  const double per_neuron = 1.0 / (net.spiking_neuron_count() * 1e-3);
  int ann_correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (ann_forward(net.source(), features[i]).argmax() == labels[i]) ++ann_correct;
    const RunTrace trace = net.run_classification(features[i], duration_ms);
    for (int t = 0; t < duration_ms; ++t) {
      if (trace.predictions[t] == labels[i]) bench.perf_curve[t] += 1.0;
      std::uint64_t spikes = 0;
      for (std::size_t l = 0; l + 1 < trace.layer_spikes[t].size(); ++l)
        spikes += trace.layer_spikes[t][l];
      bench.fr_per_ms_hz[t] += static_cast<double>(spikes) * per_neuron;
    }
  }
  const double inv = 1.0 / static_cast<double>(features.size());
  for (int t = 0; t < duration_ms; ++t) {
    bench.perf_curve[t] *= inv;
    bench.fr_per_ms_hz[t] *= inv;
  }
  bench.ann_accuracy = static_cast<double>(ann_correct) * inv;
  return bench;
}

XorStreamResult xor_stream_bench(AsnnNetwork& net, const std::vector<XorSegment>& schedule) {
  if (net.layer_size(net.layer_count() - 1) != 1)
    throw std::invalid_argument("xor_stream_bench: net must have a single output");
  net.reset();
  XorStreamResult res;
  const int settle = static_cast<int>(std::ceil(2.0 * net.layer_params(0).tau_kappa));
  std::uint64_t spikes = 0;
  int settled_total = 0, settled_correct = 0;
  for (const XorSegment& seg : schedule) {
    const std::vector<double> frame{seg.x0, seg.x1};
    double latency = seg.duration_ms;
    bool matched = false;
    for (int t = 0; t < seg.duration_ms; ++t) {
      const StepCounters c = net.tick(frame);
      for (std::size_t l = 0; l + 1 < c.spikes_per_layer.size(); ++l)
        spikes += c.spikes_per_layer[l];
      const double out = net.readout()[0];
      const int decision = out > 0.5 ? 1 : 0;
      res.output.push_back(out);
      res.expected.push_back(seg.label);
      if (!matched && decision == seg.label) {
        latency = t + 1;
        matched = true;
      }
      if (t >= settle) {
        ++settled_total;
        if (decision == seg.label) ++settled_correct;
      }
    }
    if (&seg != &schedule.front()) res.switch_latencies_ms.push_back(latency);
  }
  const double total_s = static_cast<double>(res.output.size()) / 1000.0;
  if (total_s > 0.0)
    res.avg_rate_hz = static_cast<double>(spikes) / (net.spiking_neuron_count() * total_s);
  if (settled_total > 0)
    res.settled_accuracy = static_cast<double>(settled_correct) / settled_total;
  return res;
}

SwitchingResult switching_bench(AsnnNetwork& net,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<int>& labels, int noise_ms,
                                int digit_a_ms, int digit_b_ms, int n_trials,
                                std::uint64_t seed, double threshold) {
  if (features.size() < 2 || features.size() != labels.size())
    throw std::invalid_argument("switching_bench: need >= 2 labelled samples");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, features.size() - 1);
  std::normal_distribution<double> noise(0.0, 0.5 * net.layer_params(0).theta0);

  const std::size_t L = net.spiking_layer_count();
  SwitchingResult res;
  res.noise_layer_rates_hz.assign(L, 0.0);
  res.digit_layer_rates_hz.assign(L, 0.0);
  std::vector<std::uint64_t> noise_spikes(L, 0), digit_spikes(L, 0);
  double switch_sum = 0.0;
  int decided_trials = 0, decided_frames = 0, correct_frames = 0;

  for (int trial = 0; trial < n_trials; ++trial) {
    std::size_t a = pick(rng), b = pick(rng);
    while (labels[b] == labels[a]) b = pick(rng);
    net.reset();
    if (trial + 1 == n_trials) res.readout_trace.clear();
    std::vector<double> frame(features[a].size());

    const auto stream = [&](int phase, int dur) {
      double switch_at = -1.0;
      for (int t = 0; t < dur; ++t) {
        if (phase == 0)
          for (double& v : frame) v = noise(rng);
        else
          frame = features[phase == 1 ? a : b];
        const StepCounters c = net.tick(frame);
        for (std::size_t l = 0; l < L; ++l)
          (phase == 0 ? noise_spikes : digit_spikes)[l] += c.spikes_per_layer[l];
        if (trial + 1 == n_trials) res.readout_trace.push_back(net.readout());
        if (phase != 0) {
          const auto& r = net.readout();
          const bool decided = *std::max_element(r.begin(), r.end()) > threshold;
          if (decided) {
            ++decided_frames;
            const int label = labels[phase == 1 ? a : b];
            if (net.predict() == label) {
              ++correct_frames;
              if (phase == 2 && switch_at < 0.0) switch_at = t + 1;
            }
          }
        }
      }
      return switch_at;
    };
    stream(0, noise_ms);
    stream(1, digit_a_ms);
    const double st = stream(2, digit_b_ms);
    if (st >= 0.0) {
      switch_sum += st;
      ++decided_trials;
    } else {
      ++res.undecided_trials;
    }
  }

  const double noise_s = n_trials * noise_ms * 1e-3;
  const double digit_s = n_trials * (digit_a_ms + digit_b_ms) * 1e-3;
  for (std::size_t l = 0; l < L; ++l) {
    const double neurons = static_cast<double>(net.layer_size(l));
    if (noise_s > 0.0) res.noise_layer_rates_hz[l] = noise_spikes[l] / (neurons * noise_s);
    if (digit_s > 0.0) res.digit_layer_rates_hz[l] = digit_spikes[l] / (neurons * digit_s);
  }
  if (decided_trials > 0) res.switching_time_ms = switch_sum / decided_trials;
  if (decided_frames > 0)
    res.decided_accuracy = static_cast<double>(correct_frames) / decided_frames;
  return res;
}

CostReport cost_report(const StepCounters& counters, double duration_ms,
                       const AsnnNetwork& net, const CostAssumptions& assumptions) {
  if (!(duration_ms > 0.0)) throw std::invalid_argument("cost_report: duration must be > 0");
  CostReport report;
  report.connections = static_cast<double>(net.connection_count());
  std::uint64_t spikes = 0;
  for (std::size_t l = 0; l + 1 < counters.spikes_per_layer.size(); ++l)
    spikes += counters.spikes_per_layer[l];
  report.firing_rate_hz =
      static_cast<double>(spikes) / (net.spiking_neuron_count() * duration_ms * 1e-3);
  report.measured_multiplications = counters.network_multiplications;

  const double pa = assumptions.precision_bits + assumptions.overhead_bits;
  report.ann_bandwidth_bits_per_s = report.connections * pa * assumptions.ann_rate_hz;
  report.asnn_bandwidth_bits_per_s = report.connections * pa * report.firing_rate_hz;
  report.ann_mult_per_s =
      report.connections * assumptions.precision_bits * assumptions.ann_rate_hz;
  report.asnn_mult_per_s =
      report.connections * assumptions.precision_bits * report.firing_rate_hz;
  return report;
}

}  // namespace asnn
