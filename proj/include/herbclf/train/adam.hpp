// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_ADAM_HPP
#define HERBCLF_TRAIN_ADAM_HPP

#include <cstdint>
#include <vector>

#include "herbclf/zoo/model.hpp"

namespace herbclf::train
{

template <typename T>
class Adam
{
public:
  Adam(double beta1, double beta2, double epsilon) : beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {}

  // One bias-corrected update of every parameter with its current gradient.
  void Step(const std::vector<zoo::ParamView<T>> &params, double lr);

  std::int64_t steps() const noexcept { return step_; }

private:
  double beta1_, beta2_, epsilon_;
  std::int64_t step_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_ADAM_HPP
