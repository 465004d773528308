// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_DATA_PREPROCESS_HPP
#define HERBCLF_DATA_PREPROCESS_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herbclf/data/dataset.hpp"
#include "herbclf/data/image.hpp"

namespace herbclf::data
{

enum class Normalization
{
  unit_range,
  unit_range_then_standardize
};

std::string_view ToString(Normalization n);
Normalization ParseNormalization(std::string_view text);

struct PreprocessConfig
{
  int target_resolution = 128;
  Normalization normalization = Normalization::unit_range;
  std::array<float, 3> standardize_mean{0.485f, 0.456f, 0.406f};
  std::array<float, 3> standardize_std{0.229f, 0.224f, 0.225f};

  void Validate() const;

  // Value fed to the network for an 8-bit channel value.
  float Normalize(std::uint8_t value, int channel) const
  {
    const float unit = static_cast<float>(value) / 255.0f;
    if (normalization == Normalization::unit_range)
    {
      return unit;
    }
    return (unit - standardize_mean[channel]) / standardize_std[channel];
  }
};

// Resize to target_resolution^2 and normalize. Shape (R, R, 3).
Image Preprocess(const Rgb8Image &image, const PreprocessConfig &config);
Image Preprocess(ImageSample &sample, const PreprocessConfig &config);

// Resized 8-bit pixels plus labels for a subset of an index, kept compact so
// a whole partition fits in memory. Rows follow DatasetIndex::all() order.
struct LabeledImages
{
  int resolution = 0;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<std::uint8_t> pixels;  // N x R x R x 3

  std::size_t size() const noexcept { return labels.size(); }
  std::span<const std::uint8_t> row(std::size_t i) const
  {
    const std::size_t stride = static_cast<std::size_t>(resolution) * resolution * 3;
    return {pixels.data() + i * stride, stride};
  }
};

// Decodes and resizes the listed samples in parallel.
LabeledImages LoadLabeled(const DatasetIndex &index, const std::set<std::string> &ids, int resolution);

}  // namespace herbclf::data

#endif  // HERBCLF_DATA_PREPROCESS_HPP
