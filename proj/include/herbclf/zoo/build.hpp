// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_ZOO_BUILD_HPP
#define HERBCLF_ZOO_BUILD_HPP

#include <cstdint>
#include <filesystem>
#include <memory>

#include "herbclf/zoo/backbone.hpp"
#include "herbclf/zoo/model.hpp"

namespace herbclf::zoo
{

struct BuildOptions
{
  std::filesystem::path weights_dir = DefaultWeightsDir();
  std::filesystem::path artifact;  // overrides weights_dir lookup when set
};

// Scratch builds natively for float or double; backbones are float only.
template <typename T>
std::unique_ptr<Model<T>> BuildModel(const ModelSpec &spec, std::uint64_t seed, const BuildOptions &options = {});

}  // namespace herbclf::zoo

#endif  // HERBCLF_ZOO_BUILD_HPP
