// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_BATCHES_HPP
#define HERBCLF_TRAIN_BATCHES_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "herbclf/data/preprocess.hpp"
#include "herbclf/nn/tensor.hpp"

namespace herbclf::train
{

// Normalized (B, 3, R, R) tensor for the chosen rows.
template <typename T>
nn::Tensor<T> MakeBatch(const data::LabeledImages &images, std::span<const std::size_t> rows,
                        const data::PreprocessConfig &config);

std::vector<int> LabelsOf(const data::LabeledImages &images, std::span<const std::size_t> rows);

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_BATCHES_HPP
