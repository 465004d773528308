// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_APP_REFERENCE_TARGETS_HPP
#define HERBCLF_APP_REFERENCE_TARGETS_HPP

#include <span>
#include <string_view>

#include "herbclf/zoo/model_spec.hpp"

namespace herbclf::app
{

// Published 50-epoch results for one architecture on one corpus.
struct TargetRow
{
  zoo::Architecture architecture;
  std::string_view label;
  double train_loss;
  double train_accuracy;
  double test_loss;
  double test_accuracy;
};

inline constexpr double kReproduceTolerance = 0.02;

// table 1: Vietnamese corpus (200 classes); table 3: Indonesian corpus (100 classes).
// Throws UsageError for other table numbers.
std::span<const TargetRow> TargetTable(int table);
int TargetClassCount(int table);

}  // namespace herbclf::app

#endif  // HERBCLF_APP_REFERENCE_TARGETS_HPP
