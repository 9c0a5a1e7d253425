#include "asnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace asnn {

TrainData subset(const Dataset& data, const std::vector<std::size_t>& idx) {
  TrainData out;
  out.n_classes = data.n_classes;
  for (std::size_t i : idx) {
    out.features.push_back(data.features[i]);
    out.labels.push_back(data.labels[i]);
  }
  return out;
}

namespace {

// Stratified half/half split, then min-max scaling from the training rows.
void split_and_scale(Dataset& data, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.labels.size(); ++i) by_class[data.labels[i]].push_back(i);
  for (auto& [cls, rows] : by_class) {
    std::shuffle(rows.begin(), rows.end(), rng);
    const std::size_t half = (rows.size() + 1) / 2;
    data.train_idx.insert(data.train_idx.end(), rows.begin(), rows.begin() + half);
    data.val_idx.insert(data.val_idx.end(), rows.begin() + half, rows.end());
  }
  std::sort(data.train_idx.begin(), data.train_idx.end());
  std::sort(data.val_idx.begin(), data.val_idx.end());

  const std::size_t d = data.features.front().size();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i : data.train_idx)
    for (std::size_t j = 0; j < d; ++j) {
      lo[j] = std::min(lo[j], data.features[i][j]);
      hi[j] = std::max(hi[j], data.features[i][j]);
    }
  for (auto& row : data.features)
    for (std::size_t j = 0; j < d; ++j) {
      const double span = hi[j] - lo[j];
      row[j] = span > 0.0 ? (row[j] - lo[j]) / span : 0.0;
      row[j] = std::clamp(row[j], 0.0, 1.0);
    }
}

Dataset load_delimited(const std::string& path, const std::string& name,
                       std::size_t arity, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Dataset data;
  data.name = name;
  std::vector<std::string> class_names;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> feats;
    std::string field;
    while (std::getline(row, field, ',')) {
      if (feats.size() < arity) {
        try {
          std::size_t used = 0;
          feats.push_back(std::stod(field, &used));
          if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
          throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                   ": non-numeric field '" + field + "'");
        }
      } else {
        class_names.push_back(field);
      }
    }
    if (feats.size() != arity || class_names.size() != data.features.size() + 1)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(arity) + " features and a class label");
    data.features.push_back(std::move(feats));
  }
  if (data.features.empty()) throw std::runtime_error(path + ": no data rows");

  // class ids from the sorted distinct names, independent of row order
  std::vector<std::string> sorted = class_names;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const std::string& c : class_names)
    data.labels.push_back(static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), c) - sorted.begin()));
  data.n_classes = static_cast<int>(sorted.size());

  split_and_scale(data, seed);
  return data;
}

}  // namespace

Dataset load_iris(const std::string& path, std::uint64_t seed) {
  return load_delimited(path, "iris", 4, seed);
}

Dataset load_sonar(const std::string& path, std::uint64_t seed) {
  return load_delimited(path, "sonar", 60, seed);
}

namespace {

std::uint32_t read_u32(std::ifstream& in, const std::string& path, std::size_t offset) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(path + ": truncated at byte " + std::to_string(offset));
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

Dataset load_mnist(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw std::runtime_error("cannot open " + images_path);
  if (read_u32(img, images_path, 0) != 0x00000803u)
    throw std::runtime_error(images_path + ": bad magic at byte 0 (want 0x00000803)");
  const std::uint32_t n = read_u32(img, images_path, 4);
  const std::uint32_t rows = read_u32(img, images_path, 8);
  const std::uint32_t cols = read_u32(img, images_path, 12);

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw std::runtime_error("cannot open " + labels_path);
  if (read_u32(lab, labels_path, 0) != 0x00000801u)
    throw std::runtime_error(labels_path + ": bad magic at byte 0 (want 0x00000801)");
  if (read_u32(lab, labels_path, 4) != n)
    throw std::runtime_error(labels_path + ": label count differs from image count");

  Dataset data;
  data.name = "mnist";
  data.n_classes = 10;
  const std::size_t pixels = static_cast<std::size_t>(rows) * cols;
  std::vector<unsigned char> buf(pixels);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels)))
      throw std::runtime_error(images_path + ": truncated at byte " +
                               std::to_string(16 + static_cast<std::size_t>(i) * pixels));
    std::vector<double> row(pixels);
    for (std::size_t j = 0; j < pixels; ++j) row[j] = buf[j] / 255.0;
    data.features.push_back(std::move(row));
    char l;
    if (!lab.read(&l, 1))
      throw std::runtime_error(labels_path + ": truncated at byte " + std::to_string(8 + i));
    const int label = static_cast<unsigned char>(l);
    if (label > 9)
      throw std::runtime_error(labels_path + ": label " + std::to_string(label) +
                               " out of range at byte " + std::to_string(8 + i));
    data.labels.push_back(label);
    data.val_idx.push_back(i);
  }
  return data;
}

namespace {

void write_u32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                              static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8),
                              static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

void write_idx_images(const std::string& path,
                      const std::vector<std::vector<std::uint8_t>>& images, int rows,
                      int cols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_u32(out, 0x00000803u);
  write_u32(out, static_cast<std::uint32_t>(images.size()));
  write_u32(out, static_cast<std::uint32_t>(rows));
  write_u32(out, static_cast<std::uint32_t>(cols));
  for (const auto& img : images) {
    if (static_cast<int>(img.size()) != rows * cols)
      throw std::invalid_argument("write_idx_images: image size mismatch");
    out.write(reinterpret_cast<const char*>(img.data()),
              static_cast<std::streamsize>(img.size()));
  }
}

void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_u32(out, 0x00000801u);
  write_u32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace asnn
