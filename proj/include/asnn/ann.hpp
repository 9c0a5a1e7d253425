#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace asnn {

// Channel-major tensor shape; flat vectors use c = n, h = w = 1.
struct Shape {
  int c = 0;
  int h = 1;
  int w = 1;

  int size() const { return c * h * w; }
  bool operator==(const Shape&) const = default;
};

struct DenseLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;  // row-major, out x in
  std::vector<double> bias;     // out
};

struct ConvLayer {
  int n = 0;  // kernel count (output channels)
  int c = 0;  // input channels
  int k = 0;  // kernel size (k x k, "valid")
  std::vector<double> kernels;  // n x c x k x k
  std::vector<double> bias;     // n
};

struct AvgPoolLayer {
  int window = 2;  // j x j, stride j
};

// Final readout: identity accumulation, no rectification.
struct OutputLayer {
  DenseLayer dense;
};

struct LayerSpec {
  std::variant<DenseLayer, ConvLayer, AvgPoolLayer, OutputLayer> layer;

  bool is_output() const { return std::holds_alternative<OutputLayer>(layer); }
};

struct NetworkSpec {
  Shape input_shape;
  std::vector<LayerSpec> layers;

  // Shape of each layer's activations, input first. Throws on layers that do
  // not compose, naming the offending layer index.
  std::vector<Shape> shape_chain() const;
  void validate() const;
  int class_count() const;
};

struct ForwardResult {
  std::vector<std::vector<double>> activations;  // post-activation, one per layer
  std::vector<double> output;                    // scores of the final layer
  int argmax() const;                            // ties break to the lowest index
};

// Deterministic forward pass; hidden layers apply max(0, .). Dropout is never
// applied here.
ForwardResult ann_forward(const NetworkSpec& net, const std::vector<double>& input);

struct TrainConfig {
  double lr = 0.1;
  double dropout = 0.5;
  double momentum = 0.0;
  int epochs = 800;
  int batch = 10;
  std::uint64_t seed = 1;
};

struct TrainData {
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  int n_classes = 0;
};

struct TrainResult {
  NetworkSpec net;
  double train_accuracy = 0.0;
  double final_loss = 0.0;
};

// Fully connected net with the given layer sizes (input first, classes last),
// initialised uniform in +-sqrt(6/(fan_in+fan_out)) from cfg.seed.
NetworkSpec make_ffnn(const std::vector<int>& arch, std::uint64_t seed);

// SGD with momentum, inverted dropout on hidden activations, MSE loss on
// one-hot targets. Dense/Output layers only. Aborts on non-finite loss.
TrainResult train_ffnn(const std::vector<int>& arch, const TrainData& data,
                       const TrainConfig& cfg);

// MSE loss and its backprop gradients for one sample; layout matches the
// layer order (weights then bias per dense layer). Used by training and by
// the finite-difference gradient check.
struct Gradients {
  std::vector<std::vector<double>> d_weights;
  std::vector<std::vector<double>> d_bias;
  double loss = 0.0;
};
Gradients ann_gradients(const NetworkSpec& net, const std::vector<double>& input,
                        const std::vector<double>& target);

double accuracy(const NetworkSpec& net, const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels);

}  // namespace asnn
