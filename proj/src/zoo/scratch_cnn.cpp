// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/zoo/scratch_cnn.hpp"

#include <map>

#include "herbclf/error.hpp"
#include "herbclf/rng.hpp"

namespace herbclf::zoo
{

template <typename T>
ScratchCnn<T>::ScratchCnn(const ModelSpec &spec, std::uint64_t seed) : spec_(spec)
{
  spec_.Validate();
  if (spec_.architecture != Architecture::scratch)
  {
    throw UsageError("ScratchCnn built from a " + std::string(ToString(spec_.architecture)) + " spec");
  }
  Rng rng(DeriveSeed(seed, "scratch-init"));

  std::size_t in = 3;
  for (std::size_t i = 0; i < kStageChannels.size(); ++i)
  {
    const std::string name = "conv" + std::to_string(i + 1);
    net_.Add(std::make_unique<nn::Conv2d<T>>(name, in, kStageChannels[i], kKernel, kKernel / 2, rng));
    net_.Add(std::make_unique<nn::MaxPool2d<T>>(kPool));
    in = kStageChannels[i];
  }
  net_.Add(std::make_unique<nn::Flatten<T>>());
  const auto r = static_cast<std::size_t>(spec_.input_resolution);
  flatten_width_ = net_.OutputShape({1, 3, r, r})[1];
  net_.Add(std::make_unique<nn::Linear<T>>("hidden", flatten_width_, kHiddenWidth, rng));
  net_.Add(std::make_unique<nn::Relu<T>>());
  net_.Add(std::make_unique<nn::Linear<T>>("head", kHiddenWidth, static_cast<std::size_t>(spec_.num_classes), rng));
}

template <typename T>
nn::Tensor<T> ScratchCnn<T>::ForwardImpl(const nn::Tensor<T> &batch)
{
  return net_.Forward(batch, training_);
}

template <typename T>
void ScratchCnn<T>::Backward(const nn::Tensor<T> &grad_logits)
{
  if (!training_)
  {
    throw Error("Backward called on a model in evaluation mode");
  }
  net_.Backward(grad_logits);
}

template <typename T>
std::vector<ParamView<T>> ScratchCnn<T>::Parameters()
{
  std::vector<ParamView<T>> out;
  for (auto *p : net_.Parameters())
  {
    out.push_back({p->name, p->value.shape(), p->value.values(), p->grad.values()});
  }
  return out;
}

template <typename T>
void ScratchCnn<T>::ZeroGrad()
{
  for (auto *p : net_.Parameters())
  {
    p->grad.Fill(T{0});
  }
}

template <typename T>
std::vector<NamedTensor<T>> ScratchCnn<T>::State() const
{
  std::vector<NamedTensor<T>> out;
  for (auto *p : const_cast<nn::Sequential<T> &>(net_).Parameters())
  {
    out.push_back({p->name, p->value.shape(), {p->value.values().begin(), p->value.values().end()}});
  }
  return out;
}

template <typename T>
void ScratchCnn<T>::LoadState(const std::vector<NamedTensor<T>> &state)
{
  std::map<std::string, const NamedTensor<T> *> by_name;
  for (const auto &entry : state)
  {
    by_name[entry.name] = &entry;
  }
  auto params = net_.Parameters();
  if (by_name.size() != params.size())
  {
    throw DataError("state has " + std::to_string(by_name.size()) + " tensors, model has " +
                    std::to_string(params.size()));
  }
  for (auto *p : params)
  {
    auto it = by_name.find(p->name);
    if (it == by_name.end())
    {
      throw DataError("state is missing tensor '" + p->name + "'");
    }
    if (it->second->shape != p->value.shape() || it->second->values.size() != p->value.size())
    {
      throw DataError("tensor '" + p->name + "' has shape " + nn::ToString(it->second->shape) + ", expected " +
                      nn::ToString(p->value.shape()));
    }
    std::copy(it->second->values.begin(), it->second->values.end(), p->value.data());
  }
}

template class ScratchCnn<float>;
template class ScratchCnn<double>;

}  // namespace herbclf::zoo
