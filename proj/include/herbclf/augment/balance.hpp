// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_AUGMENT_BALANCE_HPP
#define HERBCLF_AUGMENT_BALANCE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "herbclf/augment/ops.hpp"
#include "herbclf/data/dataset.hpp"

namespace herbclf::augment
{

struct Assignment
{
  std::string parent_id;
  AugmentationOp op;

  friend bool operator==(const Assignment &, const Assignment &) = default;
};

struct BalancePlan
{
  std::string class_name;
  std::size_t originals = 0;           // provenance=original samples in the class
  std::size_t existing_augmented = 0;  // already materialized by an earlier run
  std::size_t target_count = 0;
  std::vector<Assignment> assignments;

  // Count after materialization.
  std::size_t final_count() const noexcept { return originals + existing_augmented + assignments.size(); }
};

// One plan per class, in class order. A deficient class gets
// target - current assignments: parents in a shuffled order (stream derived
// from seed and class name) are cycled, and the k-th pass over the parents
// uses kOpOrder[k]. Pairs that already exist on disk are skipped. Classes at
// or above target get an empty plan. Throws DataError when the seven-op pool
// cannot cover the deficit.
std::vector<BalancePlan> PlanBalance(const data::DatasetIndex &index, std::size_t target_count, std::uint64_t seed);

// "<parent_stem>__aug_<opname><parent_ext>" next to the parent.
std::filesystem::path AugmentedPath(const std::filesystem::path &parent_path, AugmentationOp op);

// Writes every assignment of a plan to disk. The parent is resized to
// resolution^2 first, then transformed. Throws DataError if any target file
// already exists (checked before anything is written).
std::vector<data::ImageSample> Materialize(const BalancePlan &plan, const data::DatasetIndex &index, int resolution = 128);

// CSV: class,parent_id,op
void WritePlanCsv(const std::vector<BalancePlan> &plans, const std::filesystem::path &path);

}  // namespace herbclf::augment

#endif  // HERBCLF_AUGMENT_BALANCE_HPP
