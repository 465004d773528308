// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/data/preprocess.hpp"

#include <algorithm>

#include "herbclf/error.hpp"
#include "herbclf/parallel.hpp"

namespace herbclf::data
{

std::string_view ToString(Normalization n)
{
  return n == Normalization::unit_range ? "unit_range" : "unit_range_then_standardize";
}

Normalization ParseNormalization(std::string_view text)
{
  if (text == "unit_range")
  {
    return Normalization::unit_range;
  }
  if (text == "unit_range_then_standardize" || text == "standardize")
  {
    return Normalization::unit_range_then_standardize;
  }
  throw UsageError("unknown normalization '" + std::string(text) + "'");
}

void PreprocessConfig::Validate() const
{
  if (target_resolution <= 0)
  {
    throw UsageError("target resolution must be positive, got " + std::to_string(target_resolution));
  }
  if (normalization == Normalization::unit_range_then_standardize)
  {
    for (float s : standardize_std)
    {
      if (!(s > 0.0f))
      {
        throw UsageError("standardization std must be positive");
      }
    }
  }
}

Image Preprocess(const Rgb8Image &image, const PreprocessConfig &config)
{
  config.Validate();
  const Rgb8Image resized = ResizeSquare(image, config.target_resolution);
  Image out(resized.height, resized.width);
  for (std::size_t i = 0; i < resized.pixels.size(); ++i)
  {
    out.pixels[i] = config.Normalize(resized.pixels[i], static_cast<int>(i % 3));
  }
  return out;
}

Image Preprocess(ImageSample &sample, const PreprocessConfig &config)
{
  if (sample.pixels)
  {
    return Preprocess(ToRgb8(*sample.pixels), config);
  }
  return Preprocess(DecodeRgb8(sample.source_path), config);
}

LabeledImages LoadLabeled(const DatasetIndex &index, const std::set<std::string> &ids, int resolution)
{
  if (resolution <= 0)
  {
    throw UsageError("resolution must be positive");
  }
  LabeledImages out;
  out.resolution = resolution;
  std::vector<const ImageSample *> rows;
  for (const ImageSample *s : index.all())
  {
    if (ids.contains(s->sample_id))
    {
      rows.push_back(s);
    }
  }
  if (rows.size() != ids.size())
  {
    throw DataError("requested " + std::to_string(ids.size()) + " samples but only " + std::to_string(rows.size()) +
                    " exist in the corpus");
  }
  const std::size_t stride = static_cast<std::size_t>(resolution) * resolution * 3;
  out.pixels.resize(rows.size() * stride);
  out.ids.resize(rows.size());
  out.labels.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    out.ids[i] = rows[i]->sample_id;
    out.labels[i] = index.label_of(rows[i]->class_name);
  }
  ParallelFor(static_cast<std::ptrdiff_t>(rows.size()), [&](std::ptrdiff_t i) {
    const Rgb8Image resized = ResizeSquare(DecodeRgb8(rows[i]->source_path), resolution);
    std::copy(resized.pixels.begin(), resized.pixels.end(), out.pixels.begin() + static_cast<std::ptrdiff_t>(i * stride));
  });
  return out;
}

}  // namespace herbclf::data
