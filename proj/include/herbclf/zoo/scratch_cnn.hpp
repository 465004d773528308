// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_ZOO_SCRATCH_CNN_HPP
#define HERBCLF_ZOO_SCRATCH_CNN_HPP

#include <array>
#include <cstdint>

#include "herbclf/nn/layers.hpp"
#include "herbclf/zoo/model.hpp"

namespace herbclf::zoo
{

// Three 3x3 same-padded conv stages (32, 64, 128 channels), each followed by
// a 2x2 max-pool, then flatten -> linear(512) -> ReLU -> linear(K).
// At 128^2 the flattened width is 128 * 16 * 16.
template <typename T>
class ScratchCnn final : public Model<T>
{
public:
  static constexpr std::array<std::size_t, 3> kStageChannels{32, 64, 128};
  static constexpr std::size_t kKernel = 3;
  static constexpr std::size_t kPool = 2;
  static constexpr std::size_t kHiddenWidth = 512;

  ScratchCnn(const ModelSpec &spec, std::uint64_t seed);

  const ModelSpec &spec() const noexcept override { return spec_; }
  void Backward(const nn::Tensor<T> &grad_logits) override;
  std::vector<ParamView<T>> Parameters() override;
  void ZeroGrad() override;
  void SetTraining(bool training) override { training_ = training; }
  bool training() const noexcept override { return training_; }
  std::vector<NamedTensor<T>> State() const override;
  void LoadState(const std::vector<NamedTensor<T>> &state) override;
  std::string head_prefix() const override { return "head."; }

  std::size_t flatten_width() const noexcept { return flatten_width_; }

protected:
  nn::Tensor<T> ForwardImpl(const nn::Tensor<T> &batch) override;

private:
  ModelSpec spec_;
  nn::Sequential<T> net_;
  std::size_t flatten_width_ = 0;
  bool training_ = false;
};

}  // namespace herbclf::zoo

#endif  // HERBCLF_ZOO_SCRATCH_CNN_HPP
