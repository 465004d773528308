// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_CHECKPOINT_HPP
#define HERBCLF_TRAIN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "herbclf/data/preprocess.hpp"
#include "herbclf/zoo/model.hpp"

namespace herbclf::train
{

// Layout: 8-byte magic "HERBCKPT", u32 version, u64 header length, JSON
// header, then the raw little-endian tensor data in header order.
struct CheckpointInfo
{
  zoo::ModelSpec spec;
  std::uint64_t seed = 0;
  int epoch = 0;
  std::string dataset;
  std::vector<std::string> class_names;
  data::Normalization normalization = data::Normalization::unit_range;
  std::string dtype;  // "f32" or "f64"
};

std::string CheckpointFileName(zoo::Architecture arch, const std::string &dataset, int epoch);

template <typename T>
void SaveCheckpoint(const std::filesystem::path &path, const CheckpointInfo &info,
                    const std::vector<zoo::NamedTensor<T>> &state);

CheckpointInfo ReadCheckpointInfo(const std::filesystem::path &path);

// Tensors converted to T when stored at another precision.
template <typename T>
std::vector<zoo::NamedTensor<T>> ReadCheckpointState(const std::filesystem::path &path);

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_CHECKPOINT_HPP
