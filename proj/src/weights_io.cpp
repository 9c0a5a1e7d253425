#include "asnn/weights_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace asnn {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kVersion = 1;

ordered_json dense_json(const DenseLayer& d, const char* kind) {
  ordered_json j;
  j["kind"] = kind;
  j["in"] = d.in;
  j["out"] = d.out;
  j["weights"] = d.weights;
  j["bias"] = d.bias;
  return j;
}

DenseLayer dense_from(const json& j, std::size_t idx) {
  DenseLayer d;
  d.in = j.at("in").get<int>();
  d.out = j.at("out").get<int>();
  d.weights = j.at("weights").get<std::vector<double>>();
  d.bias = j.at("bias").get<std::vector<double>>();
  if (static_cast<int>(d.weights.size()) != d.in * d.out ||
      static_cast<int>(d.bias.size()) != d.out)
    throw std::runtime_error("weight file: layer " + std::to_string(idx) +
                             " declared shape does not match array sizes");
  return d;
}

}  // namespace

std::string weights_to_string(const NetworkSpec& net) {
  ordered_json j;
  j["format"] = "asnn-weights";
  j["version"] = kVersion;
  j["input_shape"] = {{"c", net.input_shape.c}, {"h", net.input_shape.h},
                      {"w", net.input_shape.w}};
  j["layers"] = ordered_json::array();
  for (const auto& spec : net.layers) {
    if (const auto* d = std::get_if<DenseLayer>(&spec.layer)) {
      j["layers"].push_back(dense_json(*d, "dense"));
    } else if (const auto* c = std::get_if<ConvLayer>(&spec.layer)) {
      ordered_json lj;
      lj["kind"] = "conv";
      lj["n"] = c->n;
      lj["c"] = c->c;
      lj["k"] = c->k;
      lj["kernels"] = c->kernels;
      lj["bias"] = c->bias;
      j["layers"].push_back(lj);
    } else if (const auto* p = std::get_if<AvgPoolLayer>(&spec.layer)) {
      j["layers"].push_back({{"kind", "avgpool"}, {"window", p->window}});
    } else {
      j["layers"].push_back(dense_json(std::get<OutputLayer>(spec.layer).dense, "output"));
    }
  }
  return j.dump(2) + "\n";
}

void save_weights(const NetworkSpec& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << weights_to_string(net);
}

NetworkSpec weights_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("weight file: ") + e.what());
  }
  if (j.value("format", "") != "asnn-weights")
    throw std::runtime_error("weight file: missing or wrong format tag");
  if (j.value("version", -1) != kVersion)
    throw std::runtime_error("weight file: unsupported version");

  NetworkSpec net;
  const auto& s = j.at("input_shape");
  net.input_shape = {s.at("c").get<int>(), s.at("h").get<int>(), s.at("w").get<int>()};
  std::size_t idx = 0;
  for (const auto& lj : j.at("layers")) {
    const std::string kind = lj.at("kind").get<std::string>();
    if (kind == "dense") {
      net.layers.push_back({dense_from(lj, idx)});
    } else if (kind == "output") {
      net.layers.push_back({OutputLayer{dense_from(lj, idx)}});
    } else if (kind == "conv") {
      ConvLayer c;
      c.n = lj.at("n").get<int>();
      c.c = lj.at("c").get<int>();
      c.k = lj.at("k").get<int>();
      c.kernels = lj.at("kernels").get<std::vector<double>>();
      c.bias = lj.at("bias").get<std::vector<double>>();
      if (static_cast<int>(c.kernels.size()) != c.n * c.c * c.k * c.k ||
          static_cast<int>(c.bias.size()) != c.n)
        throw std::runtime_error("weight file: layer " + std::to_string(idx) +
                                 " declared shape does not match array sizes");
      net.layers.push_back({c});
    } else if (kind == "avgpool") {
      net.layers.push_back({AvgPoolLayer{lj.at("window").get<int>()}});
    } else {
      throw std::runtime_error("weight file: layer " + std::to_string(idx) +
                               " has unknown kind '" + kind + "'");
    }
    ++idx;
  }
  net.validate();
  return net;
}

NetworkSpec load_weights(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return weights_from_string(text);
}

}  // namespace asnn
