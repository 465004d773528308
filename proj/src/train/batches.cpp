// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/batches.hpp"

#include "herbclf/error.hpp"

namespace herbclf::train
{

template <typename T>
nn::Tensor<T> MakeBatch(const data::LabeledImages &images, std::span<const std::size_t> rows,
                        const data::PreprocessConfig &config)
{
  const auto r = static_cast<std::size_t>(images.resolution);
  const std::size_t plane = r * r;
  nn::Tensor<T> out({rows.size(), 3, r, r});
  for (std::size_t b = 0; b < rows.size(); ++b)
  {
    if (rows[b] >= images.size())
    {
      throw Error("batch row " + std::to_string(rows[b]) + " out of range");
    }
    const auto src = images.row(rows[b]);
    T *dst = out.data() + b * 3 * plane;
    for (std::size_t i = 0; i < plane; ++i)
    {
      for (int c = 0; c < 3; ++c)
      {
        dst[static_cast<std::size_t>(c) * plane + i] = static_cast<T>(config.Normalize(src[i * 3 + c], c));
      }
    }
  }
  return out;
}

std::vector<int> LabelsOf(const data::LabeledImages &images, std::span<const std::size_t> rows)
{
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(images.labels.at(i));
  return out;
}

template nn::Tensor<float> MakeBatch(const data::LabeledImages &, std::span<const std::size_t>,
                                     const data::PreprocessConfig &);
template nn::Tensor<double> MakeBatch(const data::LabeledImages &, std::span<const std::size_t>,
                                      const data::PreprocessConfig &);

}  // namespace herbclf::train
