// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_TRAIN_CONFIG_HPP
#define HERBCLF_TRAIN_CONFIG_HPP

#include <cstdint>

#include <nlohmann/json.hpp>

namespace herbclf::train
{

struct TrainConfig
{
  double base_lr = 0.001;
  double gamma = 0.9;
  int epochs = 50;
  int batch_size = 32;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  // When false the full evaluation pass runs only after the last epoch;
  // earlier rows carry the running minibatch train metrics and NaN test metrics.
  bool eval_every_epoch = true;
  bool deterministic = true;

  // Throws UsageError.
  void Validate() const;
};

// base_lr * gamma^epoch, the rate used for every update of that epoch.
double LrAt(const TrainConfig &config, int epoch);

nlohmann::ordered_json ToJson(const TrainConfig &config);

// Overrides the fields present in `doc`; unknown keys are a UsageError.
TrainConfig MergeJson(TrainConfig base, const nlohmann::json &doc);

}  // namespace herbclf::train

#endif  // HERBCLF_TRAIN_CONFIG_HPP
