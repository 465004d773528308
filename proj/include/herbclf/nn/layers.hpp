// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_NN_LAYERS_HPP
#define HERBCLF_NN_LAYERS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "herbclf/nn/tensor.hpp"
#include "herbclf/rng.hpp"

namespace herbclf::nn
{

template <typename T>
struct Parameter
{
  std::string name;
  Tensor<T> value;
  Tensor<T> grad;

  Parameter(std::string n, Shape shape) : name(std::move(n)), value(shape), grad(std::move(shape)) {}
};

// A differentiable stage. Forward with training=true keeps whatever Backward
// needs; Backward returns the gradient w.r.t. the input and accumulates
// parameter gradients.
template <typename T>
class Layer
{
public:
  virtual ~Layer() = default;

  virtual Tensor<T> Forward(const Tensor<T> &x, bool training) = 0;
  virtual Tensor<T> Backward(const Tensor<T> &grad_out) = 0;
  virtual Shape OutputShape(const Shape &input) const = 0;
  virtual std::vector<Parameter<T> *> Parameters() { return {}; }
};

// Weights and bias drawn from U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
template <typename T>
void InitUniformFanIn(Tensor<T> &tensor, std::size_t fan_in, Rng &rng);

template <typename T>
class Conv2d final : public Layer<T>
{
public:
  Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
         std::size_t padding, Rng &rng);

  Tensor<T> Forward(const Tensor<T> &x, bool training) override;
  Tensor<T> Backward(const Tensor<T> &grad_out) override;
  Shape OutputShape(const Shape &input) const override;
  std::vector<Parameter<T> *> Parameters() override { return {&weight_, &bias_}; }

private:
  std::size_t in_channels_, out_channels_, kernel_, padding_;
  Parameter<T> weight_;
  Parameter<T> bias_;
  std::optional<Tensor<T>> input_;
};

template <typename T>
class MaxPool2d final : public Layer<T>
{
public:
  explicit MaxPool2d(std::size_t window) : window_(window) {}

  Tensor<T> Forward(const Tensor<T> &x, bool training) override;
  Tensor<T> Backward(const Tensor<T> &grad_out) override;
  Shape OutputShape(const Shape &input) const override;

private:
  std::size_t window_;
  Shape input_shape_;
  std::vector<std::uint32_t> argmax_;
};

template <typename T>
class Relu final : public Layer<T>
{
public:
  Tensor<T> Forward(const Tensor<T> &x, bool training) override;
  Tensor<T> Backward(const Tensor<T> &grad_out) override;
  Shape OutputShape(const Shape &input) const override { return input; }

private:
  std::optional<Tensor<T>> input_;
};

// (N, ...) -> (N, prod(...))
template <typename T>
class Flatten final : public Layer<T>
{
public:
  Tensor<T> Forward(const Tensor<T> &x, bool training) override;
  Tensor<T> Backward(const Tensor<T> &grad_out) override;
  Shape OutputShape(const Shape &input) const override;

private:
  Shape input_shape_;
};

// y = x W^T + b, W stored (out, in).
template <typename T>
class Linear final : public Layer<T>
{
public:
  Linear(std::string name, std::size_t in_features, std::size_t out_features, Rng &rng);

  Tensor<T> Forward(const Tensor<T> &x, bool training) override;
  Tensor<T> Backward(const Tensor<T> &grad_out) override;
  Shape OutputShape(const Shape &input) const override;
  std::vector<Parameter<T> *> Parameters() override { return {&weight_, &bias_}; }

  std::size_t in_features() const noexcept { return in_; }
  std::size_t out_features() const noexcept { return out_; }

private:
  std::size_t in_, out_;
  Parameter<T> weight_;
  Parameter<T> bias_;
  std::optional<Tensor<T>> input_;
};

template <typename T>
class Sequential
{
public:
  void Add(std::unique_ptr<Layer<T>> layer) { layers_.push_back(std::move(layer)); }

  Tensor<T> Forward(const Tensor<T> &x, bool training);
  Tensor<T> Backward(const Tensor<T> &grad_out);
  Shape OutputShape(Shape input) const;
  std::vector<Parameter<T> *> Parameters();

  std::size_t size() const noexcept { return layers_.size(); }
  Layer<T> &at(std::size_t i) { return *layers_.at(i); }

private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

}  // namespace herbclf::nn

#endif  // HERBCLF_NN_LAYERS_HPP
