// Command-line driver: training, conversion, classification and the
// benchmark/report suite. Every run writes its resolved configuration and
// machine-readable outputs into a run directory; rerunning from that config
// reproduces the metric files byte for byte.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asnn/dataset.hpp"
#include "asnn/experiments.hpp"
#include "asnn/network.hpp"
#include "asnn/weights_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace asnn;

namespace {

struct Options {
  std::string config;
  std::string out = "runs/last";
  std::string dataset;       // iris | sonar | mnist
  std::string data_path;     // csv or idx images
  std::string labels_path;   // idx labels
  std::string weights;       // input weight file
  std::string weights_out;   // training output
  std::string preset;        // iris | sonar | mnist-nn | mnist-cnn
  double theta0 = 0.1;
  double mf_ratio = 1.0;     // m_f as a multiple of theta0
  double mf_abs = -1.0;      // absolute override when >= 0
  double tau_kappa = 50.0;
  double tau_gamma = 15.0;
  double tau_smooth = 2.5;
  double tau_rout = 10.0;
  double dt = 1.0;
  int duration = 500;
  std::uint64_t seed = 1;
  std::string arch = "4,30,30,3";
  int epochs = 800;
  double lr = 0.1;
  double dropout = 0.5;
  double momentum = 0.0;
  int batch = 10;
  double amplitude = 1.0;
  std::string mf_list = "0.01,0.025,0.05,0.075,0.1";  // absolute values, bench-rate
  std::string s_grid = "0,0.2,0.4,0.6,0.8,1,1.2,1.4,1.6,1.8,2";
  std::string taus = "10,25,50,100,200";
  int noise_ms = 500;
  int digit_ms = 500;
  int trials = 10;
  int limit = 0;             // cap on dataset rows (0 = all)
  double precision_bits = 8.0;
  double overhead_bits = 16.0;
  double ann_rate_hz = 1000.0;
};

AsnParams make_params(const Options& o) {
  AsnParams p;
  p.theta0 = o.theta0;
  p.m_f = o.mf_abs >= 0.0 ? o.mf_abs : o.mf_ratio * o.theta0;
  p.tau_kappa = o.tau_kappa;
  p.tau_gamma = o.tau_gamma;
  p.tau_smooth = o.tau_smooth;
  p.dt = o.dt;
  p.validate();
  return p;
}

void apply_preset(Options& o) {
  if (o.preset.empty()) return;
  if (o.preset == "iris")
    o.theta0 = 0.0128;
  else if (o.preset == "sonar")
    o.theta0 = 1e-4;
  else if (o.preset == "mnist-nn" || o.preset == "mnist-cnn")
    o.theta0 = 3.9e-3;
  else
    throw CLI::ValidationError("--preset", "unknown preset '" + o.preset + "'");
}

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      out.push_back(std::stod(field));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "bad number '" + field + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

std::vector<int> parse_arch(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_list(text, "--arch")) out.push_back(static_cast<int>(v));
  return out;
}

Dataset load_dataset(const Options& o) {
  if (o.dataset == "iris") return load_iris(o.data_path, o.seed);
  if (o.dataset == "sonar") return load_sonar(o.data_path, o.seed);
  if (o.dataset == "mnist") return load_mnist(o.data_path, o.labels_path);
  throw CLI::ValidationError("--dataset", "unknown dataset '" + o.dataset + "'");
}

void limit_rows(std::vector<std::size_t>& idx, int limit) {
  if (limit > 0 && idx.size() > static_cast<std::size_t>(limit)) idx.resize(limit);
}

ordered_json config_json(const Options& o, const std::string& command) {
  ordered_json j;
  j["command"] = command;
  j["dataset"] = o.dataset;
  j["data_path"] = o.data_path;
  j["labels_path"] = o.labels_path;
  j["weights"] = o.weights;
  j["weights_out"] = o.weights_out;
  j["preset"] = o.preset;
  j["theta0"] = o.theta0;
  j["mf_ratio"] = o.mf_ratio;
  j["mf_abs"] = o.mf_abs;
  j["tau_kappa"] = o.tau_kappa;
  j["tau_gamma"] = o.tau_gamma;
  j["tau_smooth"] = o.tau_smooth;
  j["tau_rout"] = o.tau_rout;
  j["dt"] = o.dt;
  j["duration"] = o.duration;
  j["seed"] = o.seed;
  j["arch"] = o.arch;
  j["epochs"] = o.epochs;
  j["lr"] = o.lr;
  j["dropout"] = o.dropout;
  j["momentum"] = o.momentum;
  j["batch"] = o.batch;
  j["amplitude"] = o.amplitude;
  j["mf_list"] = o.mf_list;
  j["s_grid"] = o.s_grid;
  j["taus"] = o.taus;
  j["noise_ms"] = o.noise_ms;
  j["digit_ms"] = o.digit_ms;
  j["trials"] = o.trials;
  j["limit"] = o.limit;
  j["precision_bits"] = o.precision_bits;
  j["overhead_bits"] = o.overhead_bits;
  j["ann_rate_hz"] = o.ann_rate_hz;
  return j;
}

void load_config_file(Options& o, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  json j = json::parse(in);
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("dataset", o.dataset);
  get("data_path", o.data_path);
  get("labels_path", o.labels_path);
  get("weights", o.weights);
  get("weights_out", o.weights_out);
  get("preset", o.preset);
  get("theta0", o.theta0);
  get("mf_ratio", o.mf_ratio);
  get("mf_abs", o.mf_abs);
  get("tau_kappa", o.tau_kappa);
  get("tau_gamma", o.tau_gamma);
  get("tau_smooth", o.tau_smooth);
  get("tau_rout", o.tau_rout);
  get("dt", o.dt);
  get("duration", o.duration);
  get("seed", o.seed);
  get("arch", o.arch);
  get("epochs", o.epochs);
  get("lr", o.lr);
  get("dropout", o.dropout);
  get("momentum", o.momentum);
  get("batch", o.batch);
  get("amplitude", o.amplitude);
  get("mf_list", o.mf_list);
  get("s_grid", o.s_grid);
  get("taus", o.taus);
  get("noise_ms", o.noise_ms);
  get("digit_ms", o.digit_ms);
  get("trials", o.trials);
  get("limit", o.limit);
  get("precision_bits", o.precision_bits);
  get("overhead_bits", o.overhead_bits);
  get("ann_rate_hz", o.ann_rate_hz);
}

struct RunDir {
  fs::path dir;

  RunDir(const Options& o, const std::string& command) : dir(o.out) {
    fs::create_directories(dir);
    write("resolved_config.json", config_json(o, command).dump(2) + "\n");
  }

  void write(const std::string& name, const std::string& content) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
  }

  void summary(const ordered_json& j) const { write("summary.json", j.dump(2) + "\n"); }
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// ---- subcommands ----------------------------------------------------------

int cmd_train(const Options& o) {
  RunDir run(o, "train");
  const Dataset data = load_dataset(o);
  TrainConfig cfg;
  cfg.lr = o.lr;
  cfg.dropout = o.dropout;
  cfg.momentum = o.momentum;
  cfg.epochs = o.epochs;
  cfg.batch = o.batch;
  cfg.seed = o.seed;
  const std::vector<int> arch = parse_arch(o.arch);
  const TrainResult result = train_ffnn(arch, subset(data, data.train_idx), cfg);
  const TrainData val = subset(data, data.val_idx);
  const double val_acc = accuracy(result.net, val.features, val.labels);

  const std::string weights_path =
      o.weights_out.empty() ? (run.dir / "weights.json").string() : o.weights_out;
  save_weights(result.net, weights_path);

  ordered_json s;
  s["train_accuracy"] = result.train_accuracy;
  s["val_accuracy"] = val_acc;
  s["final_loss"] = result.final_loss;
  s["weights"] = weights_path;
  run.summary(s);
  std::cout << "train accuracy " << result.train_accuracy << ", validation accuracy "
            << val_acc << "\n";
  return 0;
}

int cmd_convert(const Options& o) {
  RunDir run(o, "convert");
  const NetworkSpec net = load_weights(o.weights);
  const AsnParams params = make_params(o);
  const AsnnNetwork snn = AsnnNetwork::from_ann(net, params, o.tau_rout);

  ordered_json s;
  s["layers"] = snn.layer_count();
  s["spiking_neurons"] = snn.spiking_neuron_count();
  s["connections"] = snn.connection_count();
  s["theta0"] = params.theta0;
  s["m_f"] = params.m_f;
  run.summary(s);
  std::cout << "converted " << o.weights << ": " << snn.spiking_neuron_count()
            << " spiking neurons, " << snn.connection_count() << " connections\n";
  return 0;
}

int cmd_classify(const Options& o) {
  RunDir run(o, "classify");
  Dataset data = load_dataset(o);
  limit_rows(data.val_idx, o.limit);
  const TrainData val = subset(data, data.val_idx);
  const NetworkSpec net = load_weights(o.weights);
  AsnnNetwork snn = AsnnNetwork::from_ann(net, make_params(o), o.tau_rout);

  const ClassificationBench bench =
      dataset_bench(snn, val.features, val.labels, o.duration);
  const MatchReport report =
      match_metrics(bench.perf_curve, bench.ann_accuracy, bench.fr_per_ms_hz);

  std::ostringstream curve;
  curve << "ms\taccuracy\tfiring_rate_hz\n";
  for (std::size_t t = 0; t < bench.perf_curve.size(); ++t)
    curve << (t + 1) << "\t" << fmt(bench.perf_curve[t]) << "\t"
          << fmt(bench.fr_per_ms_hz[t]) << "\n";
  run.write("perf_curve.tsv", curve.str());

  ordered_json s;
  s["ann_accuracy"] = bench.ann_accuracy;
  s["final_accuracy"] = bench.perf_curve.back();
  s["matching_time_ms"] =
      report.matching_time_ms ? json(*report.matching_time_ms) : json(nullptr);
  s["matching_firing_rate_hz"] = report.matching_firing_rate_hz;
  s["stable"] = report.stable;
  run.summary(s);
  std::cout << "ANN accuracy " << bench.ann_accuracy << ", MT "
            << (report.matching_time_ms ? std::to_string(*report.matching_time_ms) + "ms"
                                        : std::string("not reached"))
            << ", FR " << report.matching_firing_rate_hz << "Hz\n";
  return 0;
}

int cmd_bench_encode(const Options& o) {
  RunDir run(o, "bench-encode");
  const EncodingTrace trace = encode_step_bench(make_params(o), o.amplitude, o.duration);
  std::ostringstream tsv;
  tsv << "ms\ts\ts_hat\ts_hat_smooth\tu\ttheta\n";
  for (std::size_t t = 0; t < trace.s.size(); ++t)
    tsv << (t + 1) << "\t" << fmt(trace.s[t]) << "\t" << fmt(trace.s_hat[t]) << "\t"
        << fmt(trace.s_hat_smooth[t]) << "\t" << fmt(trace.u[t]) << "\t"
        << fmt(trace.theta[t]) << "\n";
  run.write("trace.tsv", tsv.str());

  std::ostringstream spikes;
  spikes << "ms\theight\n";
  for (std::size_t i = 0; i < trace.spike_times.size(); ++i)
    spikes << fmt(trace.spike_times[i]) << "\t" << fmt(trace.spike_heights[i]) << "\n";
  run.write("spikes.tsv", spikes.str());

  ordered_json s;
  s["spikes"] = trace.spike_times.size();
  s["amplitude"] = o.amplitude;
  run.summary(s);
  std::cout << trace.spike_times.size() << " spikes over " << o.duration << "ms\n";
  return 0;
}

int cmd_bench_rate(const Options& o) {
  RunDir run(o, "bench-rate");
  const std::vector<double> grid = parse_list(o.s_grid, "--s-grid");
  const std::vector<double> mfs = parse_list(o.mf_list, "--mf-list");
  std::ostringstream tsv;
  tsv << "m_f\ts\trate_hz\tmean_s_hat\tstd_s_hat\n";
  for (double mf : mfs) {
    Options local = o;
    local.mf_abs = mf;
    for (const RatePoint& p : rate_precision_curve(make_params(local), grid))
      tsv << fmt(mf) << "\t" << fmt(p.s) << "\t" << fmt(p.rate_hz) << "\t"
          << fmt(p.mean_s_hat) << "\t" << fmt(p.std_s_hat) << "\n";
  }
  run.write("rate_curves.tsv", tsv.str());

  ordered_json s;
  s["curves"] = mfs.size();
  s["grid_points"] = grid.size();
  run.summary(s);
  std::cout << mfs.size() << " curves over " << grid.size() << " drive levels\n";
  return 0;
}

int cmd_bench_tau(const Options& o) {
  RunDir run(o, "bench-tau");
  const std::vector<TauPoint> pts =
      tau_kappa_sweep(parse_list(o.taus, "--taus"), 35.0, o.theta0, o.amplitude);
  std::ostringstream tsv;
  tsv << "tau_kappa\tm_f\trate_hz\tsse\tresponsiveness_ms\n";
  for (const TauPoint& p : pts)
    tsv << fmt(p.tau_kappa) << "\t" << fmt(p.m_f) << "\t" << fmt(p.rate_hz) << "\t"
        << fmt(p.sse) << "\t" << fmt(p.responsiveness_ms) << "\n";
  run.write("tau_sweep.tsv", tsv.str());

  ordered_json s;
  s["points"] = pts.size();
  run.summary(s);
  std::cout << pts.size() << " tau_kappa points swept\n";
  return 0;
}

int cmd_bench_xor(const Options& o) {
  RunDir run(o, "bench-xor");
  NetworkSpec net;
  if (!o.weights.empty()) {
    net = load_weights(o.weights);
  } else {
    TrainData data;
    data.features = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    data.labels = {0, 1, 1, 0};
    data.n_classes = 1;
    TrainConfig cfg;
    cfg.lr = o.lr;
    cfg.momentum = o.momentum > 0.0 ? o.momentum : 0.9;
    cfg.dropout = 0.0;
    cfg.epochs = o.epochs;
    cfg.batch = 4;
    cfg.seed = o.seed;
    const TrainResult trained = train_ffnn({2, 5, 1}, data, cfg);
    if (trained.train_accuracy < 1.0)
      throw std::runtime_error("xor training did not converge; try another --seed");
    net = trained.net;
    save_weights(net, (run.dir / "weights.json").string());
  }
  AsnnNetwork snn = AsnnNetwork::from_ann(net, make_params(o), o.tau_rout);

  std::vector<XorSegment> schedule{{0, 0, 0, o.duration}, {0, 1, 1, o.duration},
                                   {1, 1, 0, o.duration}, {1, 0, 1, o.duration},
                                   {0, 0, 0, o.duration}};
  const XorStreamResult res = xor_stream_bench(snn, schedule);

  std::ostringstream tsv;
  tsv << "ms\toutput\texpected\n";
  for (std::size_t t = 0; t < res.output.size(); ++t)
    tsv << (t + 1) << "\t" << fmt(res.output[t]) << "\t" << res.expected[t] << "\n";
  run.write("stream.tsv", tsv.str());

  ordered_json s;
  s["settled_accuracy"] = res.settled_accuracy;
  s["avg_rate_hz"] = res.avg_rate_hz;
  s["switch_latencies_ms"] = res.switch_latencies_ms;
  run.summary(s);
  std::cout << "settled accuracy " << res.settled_accuracy << ", average rate "
            << res.avg_rate_hz << "Hz\n";
  return 0;
}

int cmd_bench_switch(const Options& o) {
  RunDir run(o, "bench-switch");
  Dataset data = load_dataset(o);
  limit_rows(data.val_idx, o.limit);
  const TrainData val = subset(data, data.val_idx);
  const NetworkSpec net = load_weights(o.weights);
  AsnnNetwork snn = AsnnNetwork::from_ann(net, make_params(o), o.tau_rout);

  const SwitchingResult res = switching_bench(snn, val.features, val.labels, o.noise_ms,
                                              o.digit_ms, o.digit_ms, o.trials, o.seed);

  ordered_json s;
  s["noise_layer_rates_hz"] = res.noise_layer_rates_hz;
  s["digit_layer_rates_hz"] = res.digit_layer_rates_hz;
  s["switching_time_ms"] = res.switching_time_ms;
  s["undecided_trials"] = res.undecided_trials;
  s["decided_accuracy"] = res.decided_accuracy;
  run.summary(s);
  std::cout << "switching time " << res.switching_time_ms << "ms, decided accuracy "
            << res.decided_accuracy << "\n";
  return 0;
}

int cmd_cost(const Options& o) {
  RunDir run(o, "cost");
  Dataset data = load_dataset(o);
  limit_rows(data.val_idx, o.limit);
  const TrainData val = subset(data, data.val_idx);
  const NetworkSpec net = load_weights(o.weights);
  AsnnNetwork snn = AsnnNetwork::from_ann(net, make_params(o), o.tau_rout);

  StepCounters totals;
  for (const auto& sample : val.features) {
    const RunTrace trace = snn.run_classification(sample, o.duration);
    totals.accumulate(trace.totals);
  }
  const double duration_ms = static_cast<double>(val.features.size()) * o.duration;
  const CostReport report = cost_report(
      totals, duration_ms, snn,
      CostAssumptions{o.precision_bits, o.overhead_bits, o.ann_rate_hz});

  std::ostringstream tsv;
  tsv << "quantity\tann\tasnn\n";
  tsv << "bandwidth_bits_per_s\t" << fmt(report.ann_bandwidth_bits_per_s) << "\t"
      << fmt(report.asnn_bandwidth_bits_per_s) << "\n";
  tsv << "multiplications_per_s\t" << fmt(report.ann_mult_per_s) << "\t"
      << fmt(report.asnn_mult_per_s) << "\n";
  run.write("cost.tsv", tsv.str());

  ordered_json s;
  s["connections"] = report.connections;
  s["firing_rate_hz"] = report.firing_rate_hz;
  s["measured_multiplications"] = report.measured_multiplications;
  s["ann_bandwidth_bits_per_s"] = report.ann_bandwidth_bits_per_s;
  s["asnn_bandwidth_bits_per_s"] = report.asnn_bandwidth_bits_per_s;
  s["ann_mult_per_s"] = report.ann_mult_per_s;
  s["asnn_mult_per_s"] = report.asnn_mult_per_s;
  run.summary(s);
  std::cout << "firing rate " << report.firing_rate_hz << "Hz, bandwidth ratio "
            << (report.ann_bandwidth_bits_per_s > 0
                    ? report.asnn_bandwidth_bits_per_s / report.ann_bandwidth_bits_per_s
                    : 0.0)
            << "\n";
  return 0;
}

int cmd_all_tables(const Options& o) {
  Options local = o;
  local.out = (fs::path(o.out) / "encode").string();
  cmd_bench_encode(local);
  local.out = (fs::path(o.out) / "rate").string();
  cmd_bench_rate(local);
  local.out = (fs::path(o.out) / "tau").string();
  cmd_bench_tau(local);
  local.out = (fs::path(o.out) / "xor").string();
  cmd_bench_xor(local);
  std::cout << "tables written under " << o.out << "\n";
  return 0;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON config; flags override its values");
  cmd->add_option("--out", o.out, "run directory");
  cmd->add_option("--preset", o.preset, "iris | sonar | mnist-nn | mnist-cnn");
  cmd->add_option("--theta0", o.theta0, "baseline threshold");
  cmd->add_option("--mf-ratio", o.mf_ratio, "m_f as a multiple of theta0");
  cmd->add_option("--mf", o.mf_abs, "absolute m_f (overrides --mf-ratio)");
  cmd->add_option("--tau-kappa", o.tau_kappa, "spike/PSC decay, ms");
  cmd->add_option("--tau-gamma", o.tau_gamma, "threshold decay, ms");
  cmd->add_option("--tau-smooth", o.tau_smooth, "activation smoothing, ms");
  cmd->add_option("--tau-rout", o.tau_rout, "readout smoothing, ms");
  cmd->add_option("--dt", o.dt, "step, ms");
  cmd->add_option("--duration", o.duration, "run length per sample/segment, ms");
  cmd->add_option("--seed", o.seed, "rng seed");
}

void add_dataset(CLI::App* cmd, Options& o) {
  cmd->add_option("--dataset", o.dataset, "iris | sonar | mnist");
  cmd->add_option("--data", o.data_path, "csv path (iris/sonar) or idx images (mnist)");
  cmd->add_option("--labels", o.labels_path, "idx labels (mnist)");
  cmd->add_option("--limit", o.limit, "cap validation rows (0 = all)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive spiking network simulator"};
  app.require_subcommand(1);

  Options o;
  // resolve --config before the real parse so flags override file values
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") load_config_file(o, argv[i + 1]);

  auto* train = app.add_subcommand("train", "train a dense relu network");
  add_common(train, o);
  add_dataset(train, o);
  train->add_option("--arch", o.arch, "layer sizes, e.g. 4,30,30,3");
  train->add_option("--epochs", o.epochs, "");
  train->add_option("--lr", o.lr, "");
  train->add_option("--dropout", o.dropout, "");
  train->add_option("--momentum", o.momentum, "");
  train->add_option("--batch", o.batch, "");
  train->add_option("--weights-out", o.weights_out, "weight file destination");

  auto* convert = app.add_subcommand("convert", "validate a spiking conversion");
  add_common(convert, o);
  convert->add_option("--weights", o.weights, "")->required();

  auto* classify = app.add_subcommand("classify", "spiking classification benchmark");
  add_common(classify, o);
  add_dataset(classify, o);
  classify->add_option("--weights", o.weights, "")->required();

  auto* be = app.add_subcommand("bench-encode", "single-neuron step encoding trace");
  add_common(be, o);
  be->add_option("--amplitude", o.amplitude, "");

  auto* br = app.add_subcommand("bench-rate", "firing-rate / precision curves");
  add_common(br, o);
  br->add_option("--mf-list", o.mf_list, "comma list of absolute m_f values");
  br->add_option("--s-grid", o.s_grid, "comma list of drive amplitudes");

  auto* bt = app.add_subcommand("bench-tau", "precision/responsiveness vs tau_kappa");
  add_common(bt, o);
  bt->add_option("--taus", o.taus, "comma list of tau_kappa values, ms");
  bt->add_option("--amplitude", o.amplitude, "");

  auto* bx = app.add_subcommand("bench-xor", "streaming xor");
  add_common(bx, o);
  bx->add_option("--weights", o.weights, "pre-trained 2-5-1 net (else trains one)");
  bx->add_option("--epochs", o.epochs, "");
  bx->add_option("--lr", o.lr, "");
  bx->add_option("--momentum", o.momentum, "");

  auto* bs = app.add_subcommand("bench-switch", "noise / digit switching");
  add_common(bs, o);
  add_dataset(bs, o);
  bs->add_option("--weights", o.weights, "")->required();
  bs->add_option("--noise-ms", o.noise_ms, "");
  bs->add_option("--digit-ms", o.digit_ms, "");
  bs->add_option("--trials", o.trials, "");

  auto* cost = app.add_subcommand("cost", "bandwidth / multiplication accounting");
  add_common(cost, o);
  add_dataset(cost, o);
  cost->add_option("--weights", o.weights, "")->required();
  cost->add_option("--precision-bits", o.precision_bits, "P");
  cost->add_option("--overhead-bits", o.overhead_bits, "O");
  cost->add_option("--ann-rate", o.ann_rate_hz, "H_a");

  auto* all = app.add_subcommand("all-tables", "encode + rate + tau + xor benches");
  add_common(all, o);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_preset(o);
    if (train->parsed()) return cmd_train(o);
    if (convert->parsed()) return cmd_convert(o);
    if (classify->parsed()) return cmd_classify(o);
    if (be->parsed()) return cmd_bench_encode(o);
    if (br->parsed()) return cmd_bench_rate(o);
    if (bt->parsed()) return cmd_bench_tau(o);
    if (bx->parsed()) return cmd_bench_xor(o);
    if (bs->parsed()) return cmd_bench_switch(o);
    if (cost->parsed()) return cmd_cost(o);
    if (all->parsed()) return cmd_all_tables(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
