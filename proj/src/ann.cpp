#include "asnn/ann.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace asnn {

namespace {

[[noreturn]] void layer_error(std::size_t idx, const std::string& msg) {
  throw std::runtime_error("layer " + std::to_string(idx) + ": " + msg);
}

}  // namespace

std::vector<Shape> NetworkSpec::shape_chain() const {
  std::vector<Shape> shapes;
  shapes.push_back(input_shape);
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const Shape in = shapes.back();
    const auto& l = layers[i].layer;
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      if (d->in != in.size()) layer_error(i, "dense expects " + std::to_string(d->in) +
                                                 " inputs, got " + std::to_string(in.size()));
      if (static_cast<int>(d->weights.size()) != d->in * d->out ||
          static_cast<int>(d->bias.size()) != d->out)
        layer_error(i, "dense weight/bias sizes inconsistent");
      shapes.push_back({d->out, 1, 1});
    } else if (const auto* c = std::get_if<ConvLayer>(&l)) {
      if (c->k < 1) layer_error(i, "kernel size must be >= 1");
      if (c->c != in.c) layer_error(i, "conv expects " + std::to_string(c->c) + " channels");
      const int oh = in.h - c->k + 1, ow = in.w - c->k + 1;
      if (oh < 1 || ow < 1) layer_error(i, "kernel larger than input");
      if (static_cast<int>(c->kernels.size()) != c->n * c->c * c->k * c->k ||
          static_cast<int>(c->bias.size()) != c->n)
        layer_error(i, "conv weight/bias sizes inconsistent");
      shapes.push_back({c->n, oh, ow});
    } else if (const auto* p = std::get_if<AvgPoolLayer>(&l)) {
      if (p->window < 1) layer_error(i, "pool window must be >= 1");
      if (in.h % p->window != 0 || in.w % p->window != 0)
        layer_error(i, "pool window does not divide input");
      shapes.push_back({in.c, in.h / p->window, in.w / p->window});
    } else {
      const auto& o = std::get<OutputLayer>(l).dense;
      if (o.in != in.size()) layer_error(i, "output expects " + std::to_string(o.in) +
                                                " inputs, got " + std::to_string(in.size()));
      if (static_cast<int>(o.weights.size()) != o.in * o.out ||
          static_cast<int>(o.bias.size()) != o.out)
        layer_error(i, "output weight/bias sizes inconsistent");
      shapes.push_back({o.out, 1, 1});
    }
  }
  return shapes;
}

void NetworkSpec::validate() const {
  if (layers.empty()) throw std::runtime_error("network has no layers");
  shape_chain();
  for (std::size_t i = 0; i + 1 < layers.size(); ++i)
    if (layers[i].is_output()) layer_error(i, "output layer must be last");
  if (!layers.back().is_output()) layer_error(layers.size() - 1, "final layer must be output");
  if (class_count() < 1) throw std::runtime_error("output must have >= 1 unit");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto check = [&](const std::vector<double>& v) {
      for (double x : v)
        if (!std::isfinite(x)) layer_error(i, "non-finite weight");
    };
    std::visit(
        [&](const auto& l) {
          using T = std::decay_t<decltype(l)>;
          if constexpr (std::is_same_v<T, DenseLayer>) check(l.weights), check(l.bias);
          if constexpr (std::is_same_v<T, ConvLayer>) check(l.kernels), check(l.bias);
          if constexpr (std::is_same_v<T, OutputLayer>)
            check(l.dense.weights), check(l.dense.bias);
        },
        layers[i].layer);
  }
}

int NetworkSpec::class_count() const {
  if (layers.empty() || !layers.back().is_output()) return 0;
  return std::get<OutputLayer>(layers.back().layer).dense.out;
}

namespace {

std::vector<double> dense_apply(const DenseLayer& d, const std::vector<double>& x) {
  std::vector<double> y(d.out);
  for (int j = 0; j < d.out; ++j) {
    double acc = d.bias[j];
    const double* row = d.weights.data() + static_cast<std::size_t>(j) * d.in;
    for (int i = 0; i < d.in; ++i) acc += row[i] * x[i];
    y[j] = acc;
  }
  return y;
}

std::vector<double> conv_apply(const ConvLayer& c, const Shape& in,
                               const std::vector<double>& x) {
  const int oh = in.h - c.k + 1, ow = in.w - c.k + 1;
  std::vector<double> y(static_cast<std::size_t>(c.n) * oh * ow);
  for (int n = 0; n < c.n; ++n)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = c.bias[n];
        for (int ch = 0; ch < c.c; ++ch)
          for (int ky = 0; ky < c.k; ++ky)
            for (int kx = 0; kx < c.k; ++kx)
              acc += c.kernels[((static_cast<std::size_t>(n) * c.c + ch) * c.k + ky) * c.k + kx] *
                     x[(static_cast<std::size_t>(ch) * in.h + oy + ky) * in.w + ox + kx];
        y[(static_cast<std::size_t>(n) * oh + oy) * ow + ox] = acc;
      }
  return y;
}

std::vector<double> pool_apply(const AvgPoolLayer& p, const Shape& in,
                               const std::vector<double>& x) {
  const int oh = in.h / p.window, ow = in.w / p.window;
  const double scale = 1.0 / (p.window * p.window);
  std::vector<double> y(static_cast<std::size_t>(in.c) * oh * ow);
  for (int ch = 0; ch < in.c; ++ch)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox) {
        double acc = 0.0;
        for (int dy = 0; dy < p.window; ++dy)
          for (int dx = 0; dx < p.window; ++dx)
            acc += x[(static_cast<std::size_t>(ch) * in.h + oy * p.window + dy) * in.w +
                     ox * p.window + dx];
        y[(static_cast<std::size_t>(ch) * oh + oy) * ow + ox] = acc * scale;
      }
  return y;
}

void relu_inplace(std::vector<double>& v) {
  for (double& x : v) x = std::max(0.0, x);
}

}  // namespace

ForwardResult ann_forward(const NetworkSpec& net, const std::vector<double>& input) {
  const auto shapes = net.shape_chain();
  if (static_cast<int>(input.size()) != net.input_shape.size())
    throw std::runtime_error("input size " + std::to_string(input.size()) +
                             " does not match network input " +
                             std::to_string(net.input_shape.size()));
  ForwardResult res;
  std::vector<double> cur = input;
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const auto& l = net.layers[i].layer;
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      cur = dense_apply(*d, cur);
      relu_inplace(cur);
    } else if (const auto* c = std::get_if<ConvLayer>(&l)) {
      cur = conv_apply(*c, shapes[i], cur);
      relu_inplace(cur);
    } else if (const auto* p = std::get_if<AvgPoolLayer>(&l)) {
      cur = pool_apply(*p, shapes[i], cur);
    } else {
      cur = dense_apply(std::get<OutputLayer>(l).dense, cur);
    }
    res.activations.push_back(cur);
  }
  res.output = res.activations.back();
  return res;
}

int ForwardResult::argmax() const {
  return static_cast<int>(std::max_element(output.begin(), output.end()) - output.begin());
}

NetworkSpec make_ffnn(const std::vector<int>& arch, std::uint64_t seed) {
  if (arch.size() < 2) throw std::invalid_argument("make_ffnn: need input and output sizes");
  std::mt19937_64 rng(seed);
  NetworkSpec net;
  net.input_shape = {arch[0], 1, 1};
  for (std::size_t i = 1; i < arch.size(); ++i) {
    DenseLayer d;
    d.in = arch[i - 1];
    d.out = arch[i];
    const double bound = std::sqrt(6.0 / (d.in + d.out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    d.weights.resize(static_cast<std::size_t>(d.in) * d.out);
    for (double& w : d.weights) w = dist(rng);
    d.bias.assign(d.out, 0.0);
    if (i + 1 == arch.size())
      net.layers.push_back({OutputLayer{std::move(d)}});
    else
      net.layers.push_back({std::move(d)});
  }
  return net;
}

namespace {

const DenseLayer& dense_of(const LayerSpec& l) {
  if (const auto* d = std::get_if<DenseLayer>(&l.layer)) return *d;
  return std::get<OutputLayer>(l.layer).dense;
}

DenseLayer& dense_of(LayerSpec& l) {
  if (auto* d = std::get_if<DenseLayer>(&l.layer)) return *d;
  return std::get<OutputLayer>(l.layer).dense;
}

// Forward pass with optional dropout masks on hidden activations, then MSE
// backprop. Masks already include the inverted-dropout scale.
Gradients gradients_masked(const NetworkSpec& net, const std::vector<double>& input,
                           const std::vector<double>& target,
                           const std::vector<std::vector<double>>* masks) {
  const std::size_t L = net.layers.size();
  std::vector<std::vector<double>> acts(L);   // post-activation (and post-mask)
  std::vector<std::vector<double>> preact(L);
  const std::vector<double>* cur = &input;
  for (std::size_t i = 0; i < L; ++i) {
    const DenseLayer& d = dense_of(net.layers[i]);
    preact[i] = dense_apply(d, *cur);
    acts[i] = preact[i];
    if (i + 1 < L) {
      relu_inplace(acts[i]);
      if (masks)
        for (std::size_t j = 0; j < acts[i].size(); ++j) acts[i][j] *= (*masks)[i][j];
    }
    cur = &acts[i];
  }

  Gradients g;
  g.d_weights.resize(L);
  g.d_bias.resize(L);
  const std::vector<double>& out = acts[L - 1];
  std::vector<double> delta(out.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double e = out[j] - target[j];
    g.loss += e * e;
    delta[j] = 2.0 * e / static_cast<double>(out.size());
  }
  g.loss /= static_cast<double>(out.size());

  for (std::size_t li = L; li-- > 0;) {
    const DenseLayer& d = dense_of(net.layers[li]);
    const std::vector<double>& in = (li == 0) ? input : acts[li - 1];
    g.d_weights[li].assign(d.weights.size(), 0.0);
    g.d_bias[li].assign(d.bias.size(), 0.0);
    for (int j = 0; j < d.out; ++j) {
      g.d_bias[li][j] = delta[j];
      double* wrow = g.d_weights[li].data() + static_cast<std::size_t>(j) * d.in;
      for (int i = 0; i < d.in; ++i) wrow[i] = delta[j] * in[i];
    }
    if (li == 0) break;
    std::vector<double> prev(d.in, 0.0);
    for (int j = 0; j < d.out; ++j) {
      const double* wrow = d.weights.data() + static_cast<std::size_t>(j) * d.in;
      for (int i = 0; i < d.in; ++i) prev[i] += wrow[i] * delta[j];
    }
    for (int i = 0; i < d.in; ++i) {
      if (preact[li - 1][i] <= 0.0) prev[i] = 0.0;            // ReLU gate
      else if (masks) prev[i] *= (*masks)[li - 1][i];         // dropout gate
    }
    delta = std::move(prev);
  }
  return g;
}

}  // namespace

Gradients ann_gradients(const NetworkSpec& net, const std::vector<double>& input,
                        const std::vector<double>& target) {
  return gradients_masked(net, input, target, nullptr);
}

TrainResult train_ffnn(const std::vector<int>& arch, const TrainData& data,
                       const TrainConfig& cfg) {
  if (!(cfg.lr > 0.0)) throw std::invalid_argument("train_ffnn: lr must be > 0");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0)
    throw std::invalid_argument("train_ffnn: dropout must be in [0,1)");
  if (arch.back() != data.n_classes)
    throw std::invalid_argument("train_ffnn: output size does not match class count");

  TrainResult res;
  res.net = make_ffnn(arch, cfg.seed);
  const std::size_t L = res.net.layers.size();
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  std::bernoulli_distribution keep(1.0 - cfg.dropout);

  std::vector<std::vector<double>> vel_w(L), vel_b(L);
  for (std::size_t i = 0; i < L; ++i) {
    vel_w[i].assign(dense_of(res.net.layers[i]).weights.size(), 0.0);
    vel_b[i].assign(dense_of(res.net.layers[i]).bias.size(), 0.0);
  }

  const std::size_t n = data.features.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::vector<double>> masks(L);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += cfg.batch) {
      const std::size_t end = std::min(n, start + cfg.batch);
      std::vector<std::vector<double>> gw(L), gb(L);
      for (std::size_t i = 0; i < L; ++i) {
        gw[i].assign(vel_w[i].size(), 0.0);
        gb[i].assign(vel_b[i].size(), 0.0);
      }
      for (std::size_t s = start; s < end; ++s) {
        const std::size_t idx = order[s];
        if (cfg.dropout > 0.0) {
          const double scale = 1.0 / (1.0 - cfg.dropout);
          for (std::size_t i = 0; i + 1 < L; ++i) {
            masks[i].resize(dense_of(res.net.layers[i]).out);
            for (double& m : masks[i]) m = keep(rng) ? scale : 0.0;
          }
        }
        // one output unit: regression on the 0/1 label; otherwise one-hot
        std::vector<double> target(data.n_classes, 0.0);
        if (data.n_classes == 1)
          target[0] = static_cast<double>(data.labels[idx]);
        else
          target[data.labels[idx]] = 1.0;
        Gradients g = gradients_masked(res.net, data.features[idx], target,
                                       cfg.dropout > 0.0 ? &masks : nullptr);
        if (!std::isfinite(g.loss))
          throw std::runtime_error("train_ffnn: non-finite loss at epoch " +
                                   std::to_string(epoch) + ", sample " + std::to_string(idx));
        epoch_loss += g.loss;
        for (std::size_t i = 0; i < L; ++i) {
          for (std::size_t j = 0; j < gw[i].size(); ++j) gw[i][j] += g.d_weights[i][j];
          for (std::size_t j = 0; j < gb[i].size(); ++j) gb[i][j] += g.d_bias[i][j];
        }
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (std::size_t i = 0; i < L; ++i) {
        DenseLayer& d = dense_of(res.net.layers[i]);
        for (std::size_t j = 0; j < d.weights.size(); ++j) {
          vel_w[i][j] = cfg.momentum * vel_w[i][j] - cfg.lr * gw[i][j] * inv;
          d.weights[j] += vel_w[i][j];
        }
        for (std::size_t j = 0; j < d.bias.size(); ++j) {
          vel_b[i][j] = cfg.momentum * vel_b[i][j] - cfg.lr * gb[i][j] * inv;
          d.bias[j] += vel_b[i][j];
        }
      }
    }
    res.final_loss = epoch_loss / static_cast<double>(n);
  }
  res.train_accuracy = accuracy(res.net, data.features, data.labels);
  return res;
}

double accuracy(const NetworkSpec& net, const std::vector<std::vector<double>>& features,
                const std::vector<int>& labels) {
  if (features.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const ForwardResult r = ann_forward(net, features[i]);
    const int pred = r.output.size() == 1 ? (r.output[0] > 0.5 ? 1 : 0) : r.argmax();
    if (pred == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(features.size());
}

}  // namespace asnn
