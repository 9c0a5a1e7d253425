#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asnn/ann.hpp"

namespace asnn {

// Labelled feature matrix, min-max scaled into [0,1] using training-split
// statistics and clamped afterwards.
struct Dataset {
  std::string name;
  std::vector<std::vector<double>> features;
  std::vector<int> labels;
  int n_classes = 0;
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
};

// Rows of `idx` packed into a trainable view.
TrainData subset(const Dataset& data, const std::vector<std::size_t>& idx);

// Comma-separated numeric features with a trailing class name. Stratified
// half/half train/validation split drawn from `seed`; features min-max scaled
// by the training split. Parse errors carry the 1-based line number.
Dataset load_iris(const std::string& path, std::uint64_t seed = 1);
Dataset load_sonar(const std::string& path, std::uint64_t seed = 1);

// IDX image/label pair; pixels scaled by 1/255. All rows land in the
// validation split. Format errors carry the byte offset.
Dataset load_mnist(const std::string& images_path, const std::string& labels_path);

// Minimal IDX writers for fixtures: magic 0x00000803 / 0x00000801.
void write_idx_images(const std::string& path,
                      const std::vector<std::vector<std::uint8_t>>& images, int rows,
                      int cols);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

}  // namespace asnn
