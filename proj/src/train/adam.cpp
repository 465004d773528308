// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/adam.hpp"

#include "herbclf/error.hpp"
#include "herbclf/nn/kernels.hpp"

namespace herbclf::train
{

template <typename T>
void Adam<T>::Step(const std::vector<zoo::ParamView<T>> &params, double lr)
{
  if (m_.empty())
  {
    for (const auto &p : params)
    {
      m_.emplace_back(p.value.size(), T{0});
      v_.emplace_back(p.value.size(), T{0});
    }
  }
  if (params.size() != m_.size())
  {
    throw Error("Adam state tracks " + std::to_string(m_.size()) + " tensors, got " + std::to_string(params.size()));
  }
  ++step_;
  const nn::AdamStepArgs args{lr, beta1_, beta2_, epsilon_, step_};
  for (std::size_t i = 0; i < params.size(); ++i)
  {
    const auto &p = params[i];
    if (p.value.size() != m_[i].size() || p.grad.size() != p.value.size())
    {
      throw Error("parameter '" + p.name + "' changed size between Adam steps");
    }
    nn::kernels::AdamStep(p.value.size(), p.value.data(), p.grad.data(), m_[i].data(), v_[i].data(), args);
  }
}

template class Adam<float>;
template class Adam<double>;

}  // namespace herbclf::train
