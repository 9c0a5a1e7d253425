#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "asnn/experiments.hpp"
#include "doctest.h"

using namespace asnn;

namespace {

AsnParams params(double theta0 = 0.1, double m_f = 0.01) {
  AsnParams p;
  p.theta0 = theta0;
  p.m_f = m_f;
  return p;
}

double trace_std(const std::vector<double>& v, std::size_t first) {
  double m = 0.0;
  for (std::size_t i = first; i < v.size(); ++i) m += v[i];
  m /= static_cast<double>(v.size() - first);
  double acc = 0.0;
  for (std::size_t i = first; i < v.size(); ++i) acc += (v[i] - m) * (v[i] - m);
  return std::sqrt(acc / static_cast<double>(v.size() - first));
}

}  // namespace

TEST_CASE("zero-amplitude step: no spikes, flat trace") {
  const EncodingTrace t = encode_step_bench(params(), 0.0, 500);
  CHECK(t.spike_times.empty());
  CHECK(t.s.size() == 500);
  CHECK(t.s_hat.size() == 500);
  CHECK(t.s_hat_smooth.size() == 500);
  CHECK(t.u.size() == 500);
  CHECK(t.theta.size() == 500);
  for (double v : t.s_hat) CHECK(v == 0.0);
  for (double v : t.theta) CHECK(v == 0.1);
}

TEST_CASE("trace is internally consistent at spike times") {
  const EncodingTrace t = encode_step_bench(params(), 1.0, 1000);
  CHECK(!t.spike_times.empty());
  CHECK(t.spike_times.size() == t.spike_heights.size());
  std::size_t k = 0;
  for (std::size_t i = 1; i < t.s_hat.size(); ++i) {
    const double time = static_cast<double>(i + 1) * t.dt;
    while (k < t.spike_times.size() && t.spike_times[k] < time) ++k;
    const bool spiked = k < t.spike_times.size() && t.spike_times[k] == time;
    if (spiked) {
      CHECK(t.s_hat[i] > t.s_hat[i - 1]);  // kernel jump outweighs one step of decay
      CHECK(t.spike_heights[k] >= 0.1);
      ++k;
    } else if (t.s_hat[i - 1] > 0.0) {
      CHECK(t.s_hat[i] < t.s_hat[i - 1]);  // pure decay between spikes
    }
  }
  CHECK(k == t.spike_times.size());
}

TEST_CASE("higher m_f raises the variance of the reconstruction") {
  // same drive, adaptation speeds 0.1 * theta0 vs 1 * theta0
  const EncodingTrace slow = encode_step_bench(params(0.1, 0.01), 0.5, 2000);
  const EncodingTrace fast = encode_step_bench(params(0.1, 0.1), 0.5, 2000);
  CHECK(trace_std(slow.s_hat_smooth, 1000) < trace_std(fast.s_hat_smooth, 1000));
  CHECK(slow.spike_times.size() > fast.spike_times.size());
}

TEST_CASE("golden step encoding, amplitude 1.0") {
  const EncodingTrace t = encode_step_bench(params(0.1, 0.01), 1.0, 2000);
  // frozen from the first verified run
  CHECK(t.spike_times[0] == 1.0);            // smoothing crosses theta0 in one step
  CHECK(t.spike_heights[0] == doctest::Approx(0.1));
  int late = 0;
  for (double ts : t.spike_times)
    if (ts > 1000.0) ++late;
  CHECK(late == 337);
  CHECK(t.spike_times.size() == 682);
}

TEST_CASE("rate curve: zero drive point is identically zero") {
  const auto pts = rate_precision_curve(params(), {0.0});
  CHECK(pts[0].rate_hz == 0.0);
  CHECK(pts[0].mean_s_hat == 0.0);
  CHECK(pts[0].std_s_hat == 0.0);
}

TEST_CASE("rate curve: rate non-decreasing, saturating; mean grows with S") {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.2 * i);
  const auto pts = rate_precision_curve(params(), grid);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].rate_hz >= pts[i - 1].rate_hz);
    if (pts[i - 1].s >= 0.2) CHECK(pts[i].mean_s_hat > pts[i - 1].mean_s_hat);
  }
  // saturation: the late increments shrink relative to the early ones
  const double early = pts[2].rate_hz - pts[1].rate_hz;
  const double late = pts[10].rate_hz - pts[9].rate_hz;
  CHECK(late < early);
  // approximately linear growth of the reconstruction past theta0
  for (std::size_t i = 2; i < pts.size(); ++i)
    CHECK(pts[i].mean_s_hat == doctest::Approx(pts[i].s).epsilon(0.15));
}

TEST_CASE("rate curve: std ordered by m_f at moderate drive") {
  const std::vector<double> grid{0.3, 0.5};
  const std::vector<double> mfs{0.01, 0.025, 0.05, 0.075, 0.1};
  std::vector<std::vector<RatePoint>> curves;
  for (double mf : mfs) curves.push_back(rate_precision_curve(params(0.1, mf), grid));
  for (std::size_t s = 0; s < grid.size(); ++s)
    for (std::size_t i = 1; i < mfs.size(); ++i)
      CHECK(curves[i][s].std_s_hat >= curves[i - 1][s].std_s_hat);
}

TEST_CASE("tau_kappa sweep: precision rises, responsiveness falls") {
  const auto pts = tau_kappa_sweep({10.0, 25.0, 50.0, 100.0, 200.0});
  for (const TauPoint& p : pts)
    CHECK(p.rate_hz == doctest::Approx(35.0).epsilon(0.2));
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].sse < pts[i - 1].sse);
    CHECK(pts[i].responsiveness_ms > pts[i - 1].responsiveness_ms);
  }
}

TEST_CASE("tau_kappa near dt: impulse-train regime maximises SSE") {
  const auto pts = tau_kappa_sweep({1.0, 25.0, 50.0});
  CHECK(pts[0].sse > pts[1].sse);
  CHECK(pts[0].sse > pts[2].sse);
}

TEST_CASE("match_metrics: constant perfect curve matches at 1ms") {
  const std::vector<double> perf(200, 1.0);
  const std::vector<double> fr(200, 20.0);
  const MatchReport r = match_metrics(perf, 1.0, fr);
  REQUIRE(r.matching_time_ms.has_value());
  CHECK(*r.matching_time_ms == 1.0);
  CHECK(r.stable);
  CHECK(r.error_variance == 0.0);
  CHECK(r.matching_firing_rate_hz == doctest::Approx(20.0));
}

TEST_CASE("match_metrics: momentary dips below the bound do not count") {
  // hits the bound at t=50 only, then degrades: mean over [50, end] misses it
  std::vector<double> perf(200, 0.5);
  perf[50] = 1.0;
  const MatchReport r = match_metrics(perf, 1.0, {});
  CHECK(!r.matching_time_ms.has_value());
  CHECK(!r.stable);
}

TEST_CASE("match_metrics: late stable match reports the onset") {
  std::vector<double> perf(300, 0.2);
  for (int t = 120; t < 300; ++t) perf[t] = 0.95;
  const MatchReport r = match_metrics(perf, 0.95, {});
  REQUIRE(r.matching_time_ms.has_value());
  CHECK(*r.matching_time_ms == 121.0);
}

TEST_CASE("match_metrics: firing rate uses the final 100ms window") {
  std::vector<double> fr(300, 0.0);
  for (int t = 200; t < 300; ++t) fr[t] = 50.0;
  const MatchReport r = match_metrics(std::vector<double>(300, 1.0), 1.0, fr, 100);
  CHECK(r.matching_firing_rate_hz == doctest::Approx(50.0));
}

TEST_CASE("match_metrics is pure") {
  std::vector<double> perf(150, 0.8);
  for (int t = 40; t < 150; ++t) perf[t] = 0.97;
  const std::vector<double> fr(150, 12.5);
  const MatchReport a = match_metrics(perf, 0.96, fr);
  const MatchReport b = match_metrics(perf, 0.96, fr);
  CHECK(a.matching_time_ms == b.matching_time_ms);
  CHECK(a.matching_firing_rate_hz == b.matching_firing_rate_hz);
  CHECK(a.error_variance == b.error_variance);
}

TEST_CASE("dataset_bench firing rate agrees with the network's own counter") {
  NetworkSpec net = make_ffnn({3, 6, 2}, 13);
  auto snn = AsnnNetwork::from_ann(net, params(0.01));
  const std::vector<std::vector<double>> feats{{0.6, 0.3, 0.9}};
  const std::vector<int> labels{0};
  const ClassificationBench bench = dataset_bench(snn, feats, labels, 500);

  const RunTrace trace = snn.run_classification(feats[0], 500);
  const double direct =
      AsnnNetwork::firing_rate_hz(trace, snn.spiking_neuron_count(), 100);
  double windowed = 0.0;
  for (int t = 400; t < 500; ++t) windowed += bench.fr_per_ms_hz[t];
  CHECK(windowed / 100.0 == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("dataset_bench matches stably across coding rates") {
  // two easily separable points through a fixed net; m_f down = rate up
  TrainData data;
  data.features = {{0.9, 0.1}, {0.1, 0.9}};
  data.labels = {0, 1};
  data.n_classes = 2;
  TrainConfig cfg;
  cfg.dropout = 0.0;
  cfg.epochs = 300;
  cfg.batch = 2;
  const TrainResult trained = train_ffnn({2, 6, 2}, data, cfg);
  REQUIRE(trained.train_accuracy == 1.0);

  auto fast = AsnnNetwork::from_ann(trained.net, params(0.01, 0.1));
  auto slow = AsnnNetwork::from_ann(trained.net, params(0.01, 0.5));
  const auto bf = dataset_bench(fast, data.features, data.labels, 400);
  const auto bs = dataset_bench(slow, data.features, data.labels, 400);
  const MatchReport rf = match_metrics(bf.perf_curve, bf.ann_accuracy, bf.fr_per_ms_hz);
  const MatchReport rs = match_metrics(bs.perf_curve, bs.ann_accuracy, bs.fr_per_ms_hz);
  REQUIRE(rf.matching_time_ms.has_value());
  REQUIRE(rs.matching_time_ms.has_value());
  CHECK(*rf.matching_time_ms <= 100.0);
  CHECK(*rs.matching_time_ms <= 100.0);
  CHECK(rf.matching_firing_rate_hz > rs.matching_firing_rate_hz);
}

TEST_CASE("streaming xor holds (0,0) below the decision threshold") {
  TrainData data;
  data.features = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  data.labels = {0, 1, 1, 0};
  data.n_classes = 1;
  TrainConfig cfg;
  cfg.lr = 0.1;
  cfg.momentum = 0.9;
  cfg.dropout = 0.0;
  cfg.epochs = 3000;
  cfg.batch = 4;
  cfg.seed = 2;
  const TrainResult trained = train_ffnn({2, 5, 1}, data, cfg);
  REQUIRE(trained.train_accuracy == 1.0);

  AsnParams p = params(0.02, 0.2);
  p.tau_kappa = 25.0;
  auto snn = AsnnNetwork::from_ann(trained.net, p);

  SUBCASE("constant low input") {
    const XorStreamResult r = xor_stream_bench(snn, {{0.0, 0.0, 0, 400}});
    for (std::size_t t = 100; t < r.output.size(); ++t) CHECK(r.output[t] < 0.5);
  }

  SUBCASE("pattern switches settle within twice tau_kappa") {
    const std::vector<XorSegment> schedule{
        {0, 0, 0, 300}, {0, 1, 1, 300}, {1, 1, 0, 300}, {1, 0, 1, 300}, {0, 0, 0, 300}};
    const XorStreamResult r = xor_stream_bench(snn, schedule);
    CHECK(r.switch_latencies_ms.size() == 4);
    for (double lat : r.switch_latencies_ms) CHECK(lat <= 2.0 * p.tau_kappa);
    CHECK(r.settled_accuracy == 1.0);
    CHECK(r.avg_rate_hz > 0.0);
  }
}

TEST_CASE("switching_bench: all-zero digits and no noise give total silence") {
  NetworkSpec net = make_ffnn({2, 4, 2}, 3);
  std::get<DenseLayer>(net.layers[0].layer).bias.assign(4, 0.0);
  std::get<OutputLayer>(net.layers[1].layer).dense.bias.assign(2, 0.0);
  auto snn = AsnnNetwork::from_ann(net, params());
  const std::vector<std::vector<double>> feats{{0, 0}, {0, 0}};
  const std::vector<int> labels{0, 1};
  const SwitchingResult r = switching_bench(snn, feats, labels, 0, 200, 200, 3, 1);
  for (double rate : r.digit_layer_rates_hz) CHECK(rate == 0.0);
  CHECK(r.undecided_trials == 3);
  CHECK(r.switching_time_ms == 0.0);
}

TEST_CASE("switching_bench: noise stays in the first layer") {
  NetworkSpec net = make_ffnn({4, 8, 2}, 8);
  // strong class-coding weights so digits clearly drive the net
  auto& d1 = std::get<DenseLayer>(net.layers[0].layer);
  for (double& w : d1.weights) w = std::abs(w) + 0.2;
  auto snn = AsnnNetwork::from_ann(net, params(0.05, 0.02));
  const std::vector<std::vector<double>> feats{{0.9, 0.8, 0.1, 0.0}, {0.0, 0.1, 0.8, 0.9}};
  const std::vector<int> labels{0, 1};
  const SwitchingResult r = switching_bench(snn, feats, labels, 400, 400, 400, 4, 7);
  REQUIRE(r.noise_layer_rates_hz.size() == 2);
  // input layer sees the noise; the hidden layer stays comparatively silent
  CHECK(r.noise_layer_rates_hz[1] < 0.1 * r.digit_layer_rates_hz[1]);
  CHECK(r.digit_layer_rates_hz[0] > 0.0);
}

TEST_CASE("cost report: zero-spike run zeroes the event-driven columns only") {
  NetworkSpec net = make_ffnn({2, 4, 2}, 3);
  auto snn = AsnnNetwork::from_ann(net, params());
  StepCounters idle;
  idle.spikes_per_layer.assign(3, 0);
  const CostReport r = cost_report(idle, 1000.0, snn, {});
  CHECK(r.measured_multiplications == 0);
  CHECK(r.firing_rate_hz == 0.0);
  CHECK(r.asnn_bandwidth_bits_per_s == 0.0);
  CHECK(r.asnn_mult_per_s == 0.0);
  CHECK(r.ann_bandwidth_bits_per_s == (2 * 4 + 4 * 2) * (8.0 + 16.0) * 1000.0);
  CHECK(r.ann_mult_per_s == (2 * 4 + 4 * 2) * 8.0 * 1000.0);
}

TEST_CASE("cost report: three spikes through fan-out four cost 12 multiplications") {
  // 1 -> 4 net with near-zero weights: only the input neuron ever fires
  NetworkSpec net;
  net.input_shape = {1, 1, 1};
  net.layers.push_back({DenseLayer{1, 4, {1e-6, 1e-6, 1e-6, 1e-6}, {0, 0, 0, 0}}});
  net.layers.push_back(
      {OutputLayer{DenseLayer{4, 2, std::vector<double>(8, 1e-6), {0, 0}}}});
  auto snn = AsnnNetwork::from_ann(net, params(0.1, 0.0));
  const std::vector<double> frame{0.5};
  StepCounters total;
  total.spikes_per_layer.assign(3, 0);
  int ticks = 0;
  while (total.spikes_per_layer[0] < 3 && ticks < 5000) {
    total.accumulate(snn.tick(frame));
    ++ticks;
  }
  REQUIRE(total.spikes_per_layer[0] == 3);
  CHECK(total.spikes_per_layer[1] == 0);
  CHECK(total.network_multiplications == 12);
  const CostReport r = cost_report(total, ticks * 1.0, snn, {});
  // definitional consistency: bandwidth = C * (P + O) * F_p with measured F_p
  CHECK(r.asnn_bandwidth_bits_per_s ==
        doctest::Approx(r.connections * 24.0 * r.firing_rate_hz));
}
