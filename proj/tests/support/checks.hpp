// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TESTS_CHECKS_HPP
#define HERBCLF_TESTS_CHECKS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "herbclf/train/trainer.hpp"

namespace herbclf::testing
{

struct DirectionCheck
{
  std::string label;  // "all" or a parameter name
  double analytic = 0;
  double finite_difference = 0;
  double relative_error = 0;
};

// Central differences of the cross-entropy of a double-precision scratch
// model on a fixed random batch, along `directions` random directions over
// all parameters plus one direction per parameter tensor.
std::vector<DirectionCheck> ScratchGradientCheck(std::uint64_t seed, int directions, int resolution = 128,
                                                 int batch = 2, double step = 1e-6);

struct OverfitOutcome
{
  std::vector<train::EpochMetrics> history;
  double final_train_accuracy = 0;
  int first_perfect_epoch = -1;  // first epoch with full-pass train accuracy 1.0
};

// Directory of locally exported backbone artifacts when the build produced
// them and the backbone runtime is compiled in.
std::optional<std::filesystem::path> TestWeightsDir();

// Trains the scratch model on 8 blob images of two colours (4 per class).
OverfitOutcome ScratchOverfit(std::uint64_t seed, int epochs = 200);

}  // namespace herbclf::testing

#endif  // HERBCLF_TESTS_CHECKS_HPP
