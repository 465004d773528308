// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/loss.hpp"

#include <cmath>
#include <string>

#include "herbclf/error.hpp"

namespace herbclf::train
{

namespace
{

template <typename T>
void CheckLogits(const nn::Tensor<T> &logits)
{
  if (logits.rank() != 2 || logits.dim(1) == 0)
  {
    throw DataError("logits must be (B, K) with K >= 1, got " + nn::ToString(logits.shape()));
  }
}

template <typename T>
void CheckLabels(const nn::Tensor<T> &logits, std::span<const int> labels)
{
  CheckLogits(logits);
  if (labels.size() != logits.dim(0))
  {
    throw DataError(std::to_string(labels.size()) + " labels for " + std::to_string(logits.dim(0)) + " logit rows");
  }
  const auto k = static_cast<int>(logits.dim(1));
  for (int y : labels)
  {
    if (y < 0 || y >= k)
    {
      throw DataError("label " + std::to_string(y) + " outside [0, " + std::to_string(k) + ")");
    }
  }
}

}  // namespace

template <typename T>
nn::Tensor<T> Softmax(const nn::Tensor<T> &logits)
{
  CheckLogits(logits);
  const std::size_t b = logits.dim(0), k = logits.dim(1);
  nn::Tensor<T> out(logits.shape());
  for (std::size_t i = 0; i < b; ++i)
  {
    const T *row = logits.data() + i * k;
    double peak = row[0];
    for (std::size_t j = 1; j < k; ++j) peak = std::max<double>(peak, row[j]);
    double sum = 0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(row[j] - peak);
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = static_cast<T>(std::exp(row[j] - peak) / sum);
  }
  return out;
}

template <typename T>
double CrossEntropy(const nn::Tensor<T> &logits, std::span<const int> labels, nn::Tensor<T> *grad)
{
  CheckLabels(logits, labels);
  const std::size_t b = logits.dim(0), k = logits.dim(1);
  if (grad)
  {
    *grad = nn::Tensor<T>(logits.shape());
  }
  if (b == 0)
  {
    return 0.0;
  }
  double total = 0;
  for (std::size_t i = 0; i < b; ++i)
  {
    const T *row = logits.data() + i * k;
    double peak = row[0];
    for (std::size_t j = 1; j < k; ++j) peak = std::max<double>(peak, row[j]);
    double sum = 0;
    for (std::size_t j = 0; j < k; ++j) sum += std::exp(row[j] - peak);
    const double log_z = peak + std::log(sum);
    total += log_z - row[labels[i]];
    if (grad)
    {
      for (std::size_t j = 0; j < k; ++j)
      {
        const double p = std::exp(row[j] - log_z);
        (*grad)[i * k + j] = static_cast<T>((p - (static_cast<int>(j) == labels[i] ? 1.0 : 0.0)) / b);
      }
    }
  }
  return total / static_cast<double>(b);
}

template <typename T>
std::vector<int> Argmax(const nn::Tensor<T> &logits)
{
  CheckLogits(logits);
  const std::size_t b = logits.dim(0), k = logits.dim(1);
  std::vector<int> out(b);
  for (std::size_t i = 0; i < b; ++i)
  {
    std::size_t best = 0;
    for (std::size_t j = 1; j < k; ++j)
    {
      if (logits[i * k + j] > logits[i * k + best]) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

template <typename T>
double BatchAccuracy(const nn::Tensor<T> &logits, std::span<const int> labels)
{
  CheckLabels(logits, labels);
  if (labels.empty())
  {
    return 0.0;
  }
  const auto pred = Argmax(logits);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == labels[i];
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

#define HERBCLF_INSTANTIATE(T)                                                              \
  template nn::Tensor<T> Softmax(const nn::Tensor<T> &);                                    \
  template double CrossEntropy(const nn::Tensor<T> &, std::span<const int>, nn::Tensor<T> *); \
  template std::vector<int> Argmax(const nn::Tensor<T> &);                                  \
  template double BatchAccuracy(const nn::Tensor<T> &, std::span<const int>);
HERBCLF_INSTANTIATE(float)
HERBCLF_INSTANTIATE(double)
#undef HERBCLF_INSTANTIATE

}  // namespace herbclf::train
