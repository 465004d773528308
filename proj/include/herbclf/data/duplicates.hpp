// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_DATA_DUPLICATES_HPP
#define HERBCLF_DATA_DUPLICATES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "herbclf/data/dataset.hpp"
#include "herbclf/data/image.hpp"

namespace herbclf::data
{

// 64-bit DCT hash: luminance, 7x7 box blur, 32x32 area resample, keep the
// 8x8 low-frequency block without the DC row/column, threshold at the median.
std::uint64_t PerceptualHash(const Rgb8Image &image);

int HammingDistance(std::uint64_t a, std::uint64_t b) noexcept;

struct DuplicateGroup
{
  std::vector<std::string> sample_ids;  // ascending
  bool byte_identical = false;          // every member has the same bytes
  int max_distance = 0;                 // largest pairwise hash distance
};

struct DuplicateReport
{
  int hamming_threshold = 0;
  std::vector<DuplicateGroup> groups;      // ordered by first member id
  std::vector<std::string> undecodable;    // excluded from hashing
};

// Groups are connected components of "hash distance <= threshold or same
// bytes". Report-only; nothing is touched on disk.
DuplicateReport FindNearDuplicates(const DatasetIndex &index, int hamming_threshold);

nlohmann::json ToJson(const DuplicateReport &report);

}  // namespace herbclf::data

#endif  // HERBCLF_DATA_DUPLICATES_HPP
