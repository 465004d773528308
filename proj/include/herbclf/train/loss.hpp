// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_LOSS_HPP
#define HERBCLF_TRAIN_LOSS_HPP

#include <span>
#include <vector>

#include "herbclf/nn/tensor.hpp"

namespace herbclf::train
{

// Row-wise softmax of (B, K) logits.
template <typename T>
nn::Tensor<T> Softmax(const nn::Tensor<T> &logits);

// Mean over the batch of -log softmax(logits)[label], log-sum-exp stabilised.
// When `grad` is given it receives d(loss)/d(logits) = (softmax - onehot) / B.
template <typename T>
double CrossEntropy(const nn::Tensor<T> &logits, std::span<const int> labels, nn::Tensor<T> *grad = nullptr);

// Per-row argmax; ties go to the lowest index.
template <typename T>
std::vector<int> Argmax(const nn::Tensor<T> &logits);

template <typename T>
double BatchAccuracy(const nn::Tensor<T> &logits, std::span<const int> labels);

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_LOSS_HPP
