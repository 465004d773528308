// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_DATA_SPLIT_HPP
#define HERBCLF_DATA_SPLIT_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>

#include "herbclf/data/dataset.hpp"

namespace herbclf::data
{

struct SplitAssignment
{
  std::uint64_t seed = 0;
  double train_fraction = 0.6;
  std::set<std::string> train_ids;
  std::set<std::string> test_ids;

  friend bool operator==(const SplitAssignment &, const SplitAssignment &) = default;
};

// round(fraction * count), ties rounded up.
std::size_t TrainCountFor(std::size_t count, double fraction);

// Per class: shuffle the ids under a stream derived from (seed, class name),
// the first TrainCountFor(count) go to train and the rest to test.
SplitAssignment StratifiedSplit(const DatasetIndex &index, double fraction, std::uint64_t seed);

void WriteSplitJson(const SplitAssignment &split, const std::filesystem::path &path);
SplitAssignment ReadSplitJson(const std::filesystem::path &path);

// Every id in the split exists in the index and vice versa.
void CheckSplitMatchesIndex(const SplitAssignment &split, const DatasetIndex &index);

}  // namespace herbclf::data

#endif  // HERBCLF_DATA_SPLIT_HPP
