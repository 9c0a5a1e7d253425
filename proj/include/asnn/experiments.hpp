#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "asnn/ann.hpp"
#include "asnn/asn.hpp"
#include "asnn/network.hpp"

namespace asnn {

// Per-ms record of one neuron encoding a drive signal. All arrays share the
// signal's length; spike entries are a sparse list on the same clock.
struct EncodingTrace {
  double dt = 1.0;
  std::vector<double> s;             // smoothed activation S(t)
  std::vector<double> s_hat;         // raw kernel sum
  std::vector<double> s_hat_smooth;  // receiver-side reconstruction (phi * s_hat)
  std::vector<double> u;             // S - S_hat after the step
  std::vector<double> theta;         // threshold after the step
  std::vector<double> spike_times;
  std::vector<double> spike_heights;
};

// Encodes an arbitrary per-ms drive with a single neuron from a cold start.
EncodingTrace encode_signal(const std::vector<double>& drive, const AsnParams& params);

// Step onset at t = 0: constant `amplitude` held for `duration_ms`.
EncodingTrace encode_step_bench(const AsnParams& params, double amplitude, int duration_ms);

struct RatePoint {
  double s = 0.0;           // drive amplitude
  double rate_hz = 0.0;     // spikes over the final 1s
  double mean_s_hat = 0.0;  // smoothed reconstruction, final 1s
  double std_s_hat = 0.0;
};

// Rate / precision curves over a drive grid; 1s warmup, 1s measurement.
std::vector<RatePoint> rate_precision_curve(const AsnParams& base,
                                            const std::vector<double>& s_grid);

struct TauPoint {
  double tau_kappa = 0.0;
  double m_f = 0.0;              // tuned to hit the target rate
  double rate_hz = 0.0;          // achieved rate over the step segment
  double sse = 0.0;              // reconstruction vs step over the 1s segment
  double responsiveness_ms = 0.0;  // time to fall below 0.05 after step-down
};

// Precision/responsiveness tradeoff across tau_kappa at a fixed firing rate.
// m_f is bisected per tau so the rate over the 1s step segment approaches
// `target_rate_hz`. The drive is 0 for 200ms, `amplitude` for 1s, then 0.
std::vector<TauPoint> tau_kappa_sweep(const std::vector<double>& taus,
                                      double target_rate_hz = 35.0, double theta0 = 0.1,
                                      double amplitude = 1.0);

struct MatchReport {
  std::optional<double> matching_time_ms;  // set only if the bound holds to the end
  double matching_firing_rate_hz = 0.0;    // mean over the final window
  bool stable = false;
  std::vector<double> perf_curve;          // accuracy per ms
  double error_variance = 0.0;             // of the error over [MT, end]
};

// MT = first t where error <= 1.01 * ANN error and the mean error over
// [t, end] stays within the same bound. `fr_per_ms_hz` is the network firing
// rate at each ms; the report's rate averages the final `window_ms` of it.
MatchReport match_metrics(const std::vector<double>& perf_curve, double ann_accuracy,
                          const std::vector<double>& fr_per_ms_hz, int window_ms = 100);

struct ClassificationBench {
  std::vector<double> perf_curve;    // accuracy across the dataset, per ms
  std::vector<double> fr_per_ms_hz;  // network firing rate, averaged over samples
  double ann_accuracy = 0.0;         // same weights, conventional forward pass
};

// Runs every sample for `duration_ms` from a cold start and pools the traces.
ClassificationBench dataset_bench(AsnnNetwork& net,
                                  const std::vector<std::vector<double>>& features,
                                  const std::vector<int>& labels, int duration_ms);

struct XorSegment {
  double x0 = 0.0;
  double x1 = 0.0;
  int label = 0;
  int duration_ms = 0;
};

struct XorStreamResult {
  std::vector<double> output;               // per-ms readout
  std::vector<int> expected;                // per-ms target
  std::vector<double> switch_latencies_ms;  // per segment after the first
  double avg_rate_hz = 0.0;                 // whole stream, all spiking neurons
  double settled_accuracy = 0.0;            // excludes 2*tau_kappa after each switch
};

// Streams a schedule of XOR input pairs through a single-output net with no
// reset between segments. Decision threshold 0.5 on the readout.
XorStreamResult xor_stream_bench(AsnnNetwork& net, const std::vector<XorSegment>& schedule);

struct SwitchingResult {
  std::vector<double> noise_layer_rates_hz;  // per spiking layer, noise phase
  std::vector<double> digit_layer_rates_hz;  // per spiking layer, digit phases
  double switching_time_ms = 0.0;            // mean over decided trials
  int undecided_trials = 0;
  double decided_accuracy = 0.0;  // decided frames during digit phases
  std::vector<std::vector<double>> readout_trace;  // last trial, per ms
};

// Streams noise -> digit A -> digit B per trial without reset. Noise frames
// are i.i.d. Gaussian per pixel and ms (mu 0, sigma 0.5 * theta0 of the input
// layer). A frame counts as decided when any readout exceeds `threshold`;
// switching time is the delay from digit-B onset to the first decided frame
// whose argmax is B's class.
SwitchingResult switching_bench(AsnnNetwork& net,
                                const std::vector<std::vector<double>>& features,
                                const std::vector<int>& labels, int noise_ms,
                                int digit_a_ms, int digit_b_ms, int n_trials,
                                std::uint64_t seed, double threshold = 0.3);

struct CostAssumptions {
  double precision_bits = 8.0;   // P
  double overhead_bits = 16.0;   // O: address bits per event
  double ann_rate_hz = 1000.0;   // H_a: frame rate of the conventional net
};

struct CostReport {
  double connections = 0.0;     // C
  double firing_rate_hz = 0.0;  // F_p, measured from the run's counters
  std::uint64_t measured_multiplications = 0;  // raw count over the run
  double ann_bandwidth_bits_per_s = 0.0;       // C * (P + O) * H_a
  double asnn_bandwidth_bits_per_s = 0.0;      // C * (P + O) * F_p
  double ann_mult_per_s = 0.0;                 // C * P * H_a
  double asnn_mult_per_s = 0.0;                // C * P * F_p
};

CostReport cost_report(const StepCounters& counters, double duration_ms,
                       const AsnnNetwork& net, const CostAssumptions& assumptions);

}  // namespace asnn
