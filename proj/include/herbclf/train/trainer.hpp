// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_TRAINER_HPP
#define HERBCLF_TRAIN_TRAINER_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "herbclf/data/preprocess.hpp"
#include "herbclf/train/config.hpp"
#include "herbclf/zoo/model.hpp"

namespace herbclf::train
{

struct EpochMetrics
{
  int epoch = 0;
  double lr = 0;
  double train_loss = 0;
  double train_accuracy = 0;
  double test_loss = 0;
  double test_accuracy = 0;

  friend bool operator==(const EpochMetrics &, const EpochMetrics &) = default;
};

struct PassResult
{
  double loss = 0;
  double accuracy = 0;
  std::vector<int> predictions;
};

// Full pass in evaluation mode, no updates. Restores the previous mode.
template <typename T>
PassResult EvaluatePass(zoo::Model<T> &model, const data::LabeledImages &images, const data::PreprocessConfig &config,
                        std::size_t batch_size);

struct TrainOptions
{
  // Empty disables checkpoint files.
  std::filesystem::path checkpoint_dir;
  std::string dataset_name = "dataset";
  std::vector<std::string> class_names;
  std::function<void(const EpochMetrics &)> on_epoch;
};

struct TrainResult
{
  std::vector<EpochMetrics> history;
  int best_epoch = -1;
  std::filesystem::path best_checkpoint;
  std::filesystem::path last_checkpoint;
};

// Minibatch Adam over shuffled train rows at LrAt(epoch), then a full
// evaluation pass over both partitions. Keeps the best-test-accuracy and the
// last-epoch checkpoints. A non-finite loss raises NumericError.
template <typename T>
TrainResult Train(zoo::Model<T> &model, const data::LabeledImages &train_set, const data::LabeledImages &test_set,
                  const TrainConfig &config, const data::PreprocessConfig &preprocess, const TrainOptions &options = {});

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_TRAINER_HPP
