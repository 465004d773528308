// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_ZOO_MODEL_HPP
#define HERBCLF_ZOO_MODEL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "herbclf/nn/tensor.hpp"
#include "herbclf/zoo/model_spec.hpp"

namespace herbclf::zoo
{

template <typename T>
struct ParamView
{
  std::string name;
  nn::Shape shape;
  std::span<T> value;
  std::span<T> grad;
};

// One entry of a serialized model state; covers parameters and buffers.
template <typename T>
struct NamedTensor
{
  std::string name;
  nn::Shape shape;
  std::vector<T> values;

  friend bool operator==(const NamedTensor &, const NamedTensor &) = default;
};

// A classifier mapping (B, 3, R, R) images to (B, K) logits, trained by the
// engine in train/. Implementations: the scratch CNN (hand-rolled, float or
// double) and TorchScript backbones (float).
template <typename T>
class Model
{
public:
  virtual ~Model() = default;

  virtual const ModelSpec &spec() const noexcept = 0;

  // Checks the batch shape against the ModelSpec, then runs the network.
  nn::Tensor<T> Forward(const nn::Tensor<T> &batch);

  // Backpropagates d(loss)/d(logits) of the last training-mode Forward and
  // accumulates into the parameter gradients.
  virtual void Backward(const nn::Tensor<T> &grad_logits) = 0;

  // Views stay valid until the next Forward/Backward.
  virtual std::vector<ParamView<T>> Parameters() = 0;
  virtual void ZeroGrad() = 0;

  virtual void SetTraining(bool training) = 0;
  virtual bool training() const noexcept = 0;

  virtual std::vector<NamedTensor<T>> State() const = 0;
  virtual void LoadState(const std::vector<NamedTensor<T>> &state) = 0;

  // Parameter-name prefix of the classifier head.
  virtual std::string head_prefix() const = 0;

protected:
  virtual nn::Tensor<T> ForwardImpl(const nn::Tensor<T> &batch) = 0;
};

template <typename T>
std::size_t ParameterCount(Model<T> &model);

}  // namespace herbclf::zoo

#endif  // HERBCLF_ZOO_MODEL_HPP
