// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/nn/layers.hpp"

#include <cmath>

#include "herbclf/nn/kernels.hpp"

namespace herbclf::nn
{

namespace
{

void RequireRank(const Shape &shape, std::size_t rank, const char *what)
{
  if (shape.size() != rank)
  {
    throw DataError(std::string(what) + " expects a rank-" + std::to_string(rank) + " input, got " + ToString(shape));
  }
}

template <typename T>
const Tensor<T> &Cached(const std::optional<Tensor<T>> &cache, const char *what)
{
  if (!cache)
  {
    throw Error(std::string(what) + ": Backward called without a training-mode Forward");
  }
  return *cache;
}

}  // namespace

template <typename T>
void InitUniformFanIn(Tensor<T> &tensor, std::size_t fan_in, Rng &rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  for (auto &v : tensor.values())
  {
    v = static_cast<T>(rng.Uniform(-bound, bound));
  }
}

// Conv2d ---------------------------------------------------------------------

template <typename T>
Conv2d<T>::Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels, std::size_t kernel,
                  std::size_t padding, Rng &rng)
    : in_channels_(in_channels), out_channels_(out_channels), kernel_(kernel), padding_(padding),
      weight_(name + ".weight", {out_channels, in_channels, kernel, kernel}), bias_(name + ".bias", {out_channels})
{
  const std::size_t fan_in = in_channels * kernel * kernel;
  InitUniformFanIn(weight_.value, fan_in, rng);
  InitUniformFanIn(bias_.value, fan_in, rng);
}

template <typename T>
Shape Conv2d<T>::OutputShape(const Shape &input) const
{
  RequireRank(input, 4, "Conv2d");
  if (input[1] != in_channels_)
  {
    throw DataError("Conv2d expects " + std::to_string(in_channels_) + " input channels, got " + ToString(input));
  }
  ConvShape s{input[0], input[1], input[2], input[3], out_channels_, kernel_, 1, padding_};
  return {input[0], out_channels_, s.out_height(), s.out_width()};
}

template <typename T>
Tensor<T> Conv2d<T>::Forward(const Tensor<T> &x, bool training)
{
  Tensor<T> y(OutputShape(x.shape()));
  const auto &sh = x.shape();
  ConvShape s{sh[0], sh[1], sh[2], sh[3], out_channels_, kernel_, 1, padding_};
  kernels::Conv2dForward(s, x.data(), weight_.value.data(), bias_.value.data(), y.data());
  if (training)
  {
    input_ = x;
  }
  return y;
}

template <typename T>
Tensor<T> Conv2d<T>::Backward(const Tensor<T> &grad_out)
{
  const Tensor<T> &x = Cached(input_, "Conv2d");
  const auto &sh = x.shape();
  ConvShape s{sh[0], sh[1], sh[2], sh[3], out_channels_, kernel_, 1, padding_};
  Tensor<T> dx(sh);
  kernels::Conv2dBackward(s, x.data(), weight_.value.data(), grad_out.data(), dx.data(), weight_.grad.data(),
                          bias_.grad.data());
  return dx;
}

// MaxPool2d ------------------------------------------------------------------

template <typename T>
Shape MaxPool2d<T>::OutputShape(const Shape &input) const
{
  RequireRank(input, 4, "MaxPool2d");
  return {input[0], input[1], input[2] / window_, input[3] / window_};
}

template <typename T>
Tensor<T> MaxPool2d<T>::Forward(const Tensor<T> &x, bool training)
{
  Tensor<T> y(OutputShape(x.shape()));
  const auto &sh = x.shape();
  PoolShape s{sh[0], sh[1], sh[2], sh[3], window_};
  if (training)
  {
    argmax_.resize(y.size());
    input_shape_ = sh;
  }
  kernels::MaxPoolForward(s, x.data(), y.data(), training ? argmax_.data() : nullptr);
  return y;
}

template <typename T>
Tensor<T> MaxPool2d<T>::Backward(const Tensor<T> &grad_out)
{
  if (input_shape_.empty())
  {
    throw Error("MaxPool2d: Backward called without a training-mode Forward");
  }
  Tensor<T> dx(input_shape_);
  PoolShape s{input_shape_[0], input_shape_[1], input_shape_[2], input_shape_[3], window_};
  kernels::MaxPoolBackward(s, grad_out.data(), argmax_.data(), dx.data());
  return dx;
}

// Relu -----------------------------------------------------------------------

template <typename T>
Tensor<T> Relu<T>::Forward(const Tensor<T> &x, bool training)
{
  Tensor<T> y(x.shape());
  kernels::ReluForward(x.size(), x.data(), y.data());
  if (training)
  {
    input_ = x;
  }
  return y;
}

template <typename T>
Tensor<T> Relu<T>::Backward(const Tensor<T> &grad_out)
{
  const Tensor<T> &x = Cached(input_, "Relu");
  Tensor<T> dx(x.shape());
  kernels::ReluBackward(x.size(), x.data(), grad_out.data(), dx.data());
  return dx;
}

// Flatten --------------------------------------------------------------------

template <typename T>
Shape Flatten<T>::OutputShape(const Shape &input) const
{
  if (input.empty())
  {
    throw DataError("Flatten needs a batch dimension");
  }
  return {input[0], NumElements(input) / std::max<std::size_t>(input[0], 1)};
}

template <typename T>
Tensor<T> Flatten<T>::Forward(const Tensor<T> &x, bool training)
{
  if (training)
  {
    input_shape_ = x.shape();
  }
  Tensor<T> y = x;
  y.Reshape(OutputShape(x.shape()));
  return y;
}

template <typename T>
Tensor<T> Flatten<T>::Backward(const Tensor<T> &grad_out)
{
  Tensor<T> dx = grad_out;
  dx.Reshape(input_shape_);
  return dx;
}

// Linear ---------------------------------------------------------------------

template <typename T>
Linear<T>::Linear(std::string name, std::size_t in_features, std::size_t out_features, Rng &rng)
    : in_(in_features), out_(out_features), weight_(name + ".weight", {out_features, in_features}),
      bias_(name + ".bias", {out_features})
{
  InitUniformFanIn(weight_.value, in_features, rng);
  InitUniformFanIn(bias_.value, in_features, rng);
}

template <typename T>
Shape Linear<T>::OutputShape(const Shape &input) const
{
  RequireRank(input, 2, "Linear");
  if (input[1] != in_)
  {
    throw DataError("Linear expects " + std::to_string(in_) + " features, got " + ToString(input));
  }
  return {input[0], out_};
}

template <typename T>
Tensor<T> Linear<T>::Forward(const Tensor<T> &x, bool training)
{
  Tensor<T> y(OutputShape(x.shape()));
  kernels::LinearForward(x.dim(0), in_, out_, x.data(), weight_.value.data(), bias_.value.data(), y.data());
  if (training)
  {
    input_ = x;
  }
  return y;
}

template <typename T>
Tensor<T> Linear<T>::Backward(const Tensor<T> &grad_out)
{
  const Tensor<T> &x = Cached(input_, "Linear");
  Tensor<T> dx(x.shape());
  kernels::LinearBackward(x.dim(0), in_, out_, x.data(), weight_.value.data(), grad_out.data(), dx.data(),
                          weight_.grad.data(), bias_.grad.data());
  return dx;
}

// Sequential -----------------------------------------------------------------

template <typename T>
Tensor<T> Sequential<T>::Forward(const Tensor<T> &x, bool training)
{
  Tensor<T> h = x;
  for (auto &layer : layers_)
  {
    h = layer->Forward(h, training);
  }
  return h;
}

template <typename T>
Tensor<T> Sequential<T>::Backward(const Tensor<T> &grad_out)
{
  Tensor<T> g = grad_out;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
  {
    g = (*it)->Backward(g);
  }
  return g;
}

template <typename T>
Shape Sequential<T>::OutputShape(Shape input) const
{
  for (const auto &layer : layers_)
  {
    input = layer->OutputShape(input);
  }
  return input;
}

template <typename T>
std::vector<Parameter<T> *> Sequential<T>::Parameters()
{
  std::vector<Parameter<T> *> out;
  for (auto &layer : layers_)
  {
    for (auto *p : layer->Parameters())
    {
      out.push_back(p);
    }
  }
  return out;
}

#define HERBCLF_INSTANTIATE(T)                                            \
  template void InitUniformFanIn<T>(Tensor<T> &, std::size_t, Rng &);     \
  template class Conv2d<T>;                                               \
  template class MaxPool2d<T>;                                            \
  template class Relu<T>;                                                 \
  template class Flatten<T>;                                              \
  template class Linear<T>;                                               \
  template class Sequential<T>;

HERBCLF_INSTANTIATE(float)
HERBCLF_INSTANTIATE(double)

#undef HERBCLF_INSTANTIATE

}  // namespace herbclf::nn
