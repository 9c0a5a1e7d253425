#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "asnn/dataset.hpp"
#include "asnn/weights_io.hpp"
#include "doctest.h"

using namespace asnn;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/asnn_io_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& text) const {
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
};

}  // namespace

TEST_CASE("iris loads as 150x4 with 3 balanced classes in [0,1]") {
  const Dataset d = load_iris(ASNN_DATA_DIR "/iris.csv");
  CHECK(d.features.size() == 150);
  CHECK(d.features[0].size() == 4);
  CHECK(d.n_classes == 3);
  CHECK(d.train_idx.size() == 75);
  CHECK(d.val_idx.size() == 75);
  std::vector<int> counts(3, 0);
  for (int l : d.labels) ++counts[l];
  CHECK(counts == std::vector<int>{50, 50, 50});
  for (const auto& row : d.features)
    for (double v : row) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  // stratified: each split holds 25 per class
  for (const auto& idx : {d.train_idx, d.val_idx}) {
    std::vector<int> c(3, 0);
    for (std::size_t i : idx) ++c[d.labels[i]];
    CHECK(c == std::vector<int>{25, 25, 25});
  }
}

TEST_CASE("iris split is seed-deterministic and seed-sensitive") {
  const Dataset a = load_iris(ASNN_DATA_DIR "/iris.csv", 7);
  const Dataset b = load_iris(ASNN_DATA_DIR "/iris.csv", 7);
  const Dataset c = load_iris(ASNN_DATA_DIR "/iris.csv", 8);
  CHECK(a.train_idx == b.train_idx);
  CHECK(a.features == b.features);
  CHECK(a.train_idx != c.train_idx);
}

TEST_CASE("loading already-scaled data changes nothing") {
  const Dataset first = load_iris(ASNN_DATA_DIR "/iris.csv", 3);
  TempFile f("rescaled.csv");
  std::ostringstream out;
  out.precision(17);
  const char* names[] = {"Iris-setosa", "Iris-versicolor", "Iris-virginica"};
  for (std::size_t i = 0; i < first.features.size(); ++i) {
    for (double v : first.features[i]) out << v << ",";
    out << names[first.labels[i]] << "\n";
  }
  f.write(out.str());
  const Dataset second = load_iris(f.path, 3);
  REQUIRE(second.features.size() == first.features.size());
  for (std::size_t i = 0; i < first.features.size(); ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(second.features[i][j] == doctest::Approx(first.features[i][j]).epsilon(1e-12));
}

TEST_CASE("delimited parse errors carry the line number") {
  TempFile bad("bad.csv");
  bad.write("5.1,3.5,1.4,0.2,Iris-setosa\n4.9,oops,1.4,0.2,Iris-setosa\n");
  CHECK_THROWS_WITH_AS(load_iris(bad.path), doctest::Contains("line 2"), std::runtime_error);

  TempFile arity("arity.csv");
  arity.write("5.1,3.5,1.4,Iris-setosa\n");
  CHECK_THROWS_WITH_AS(load_iris(arity.path), doctest::Contains("line 1"), std::runtime_error);
}

TEST_CASE("sonar-shaped data loads as 208x60 with 2 classes") {
  TempFile f("sonar.csv");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  std::ostringstream out;
  for (int i = 0; i < 208; ++i) {
    for (int j = 0; j < 60; ++j) out << dist(rng) << ",";
    out << (i < 97 ? "R" : "M") << "\n";
  }
  f.write(out.str());
  const Dataset d = load_sonar(f.path);
  CHECK(d.features.size() == 208);
  CHECK(d.features[0].size() == 60);
  CHECK(d.n_classes == 2);
  CHECK(d.train_idx.size() + d.val_idx.size() == 208);
}

TEST_CASE("subset packs the selected rows") {
  const Dataset d = load_iris(ASNN_DATA_DIR "/iris.csv");
  const TrainData t = subset(d, d.train_idx);
  CHECK(t.features.size() == 75);
  CHECK(t.n_classes == 3);
  CHECK(t.features[0] == d.features[d.train_idx[0]]);
  CHECK(t.labels[0] == d.labels[d.train_idx[0]]);
}

TEST_CASE("idx fixture round-trips through the writer/loader pair") {
  TempFile img("fix-images.idx");
  TempFile lab("fix-labels.idx");
  const std::vector<std::vector<std::uint8_t>> images{{0, 51, 102, 153, 204, 255},
                                                      {255, 0, 255, 0, 255, 0}};
  write_idx_images(img.path, images, 2, 3);
  write_idx_labels(lab.path, {7, 3});
  const Dataset d = load_mnist(img.path, lab.path);
  CHECK(d.features.size() == 2);
  CHECK(d.features[0].size() == 6);
  CHECK(d.labels == std::vector<int>{7, 3});
  CHECK(d.features[0][1] == doctest::Approx(51.0 / 255.0));
  CHECK(d.features[0][5] == doctest::Approx(1.0));
  CHECK(d.features[1][0] == doctest::Approx(1.0));
  CHECK(d.n_classes == 10);
}

TEST_CASE("idx magic corruption and truncation are detected") {
  TempFile img("corrupt-images.idx");
  TempFile lab("corrupt-labels.idx");
  write_idx_images(img.path, {{1, 2, 3, 4}}, 2, 2);
  write_idx_labels(lab.path, {1});

  std::fstream patch(img.path, std::ios::in | std::ios::out | std::ios::binary);
  patch.put('\x42');
  patch.close();
  CHECK_THROWS_WITH_AS(load_mnist(img.path, lab.path), doctest::Contains("bad magic"),
                       std::runtime_error);

  write_idx_images(img.path, {{1, 2, 3, 4}}, 2, 2);
  std::ofstream cut(img.path, std::ios::binary | std::ios::in | std::ios::out);
  // shrink the payload: rewrite header claiming 2 images over a 1-image body
  cut.seekp(4);
  const char two[4] = {0, 0, 0, 2};
  cut.write(two, 4);
  cut.close();
  TempFile lab2("corrupt-labels2.idx");
  write_idx_labels(lab2.path, {1, 2});
  CHECK_THROWS_WITH_AS(load_mnist(img.path, lab2.path), doctest::Contains("truncated"),
                       std::runtime_error);
}

TEST_CASE("weight files report missing paths") {
  CHECK_THROWS_WITH_AS(load_weights("/nonexistent/weights.json"),
                       doctest::Contains("cannot open"), std::runtime_error);
  NetworkSpec net = make_ffnn({2, 3, 2}, 1);
  TempFile w("weights.json");
  save_weights(net, w.path);
  const NetworkSpec back = load_weights(w.path);
  CHECK(weights_to_string(back) == weights_to_string(net));
}
