// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/config.hpp"

#include <cmath>
#include <string>

#include "herbclf/error.hpp"

namespace herbclf::train
{

void TrainConfig::Validate() const
{
  if (!(base_lr > 0) || !std::isfinite(base_lr))
  {
    throw UsageError("base_lr must be positive, got " + std::to_string(base_lr));
  }
  if (!(gamma > 0 && gamma <= 1))
  {
    throw UsageError("gamma must lie in (0, 1], got " + std::to_string(gamma));
  }
  if (epochs < 1)
  {
    throw UsageError("epochs must be at least 1, got " + std::to_string(epochs));
  }
  if (batch_size < 1)
  {
    throw UsageError("batch_size must be at least 1, got " + std::to_string(batch_size));
  }
  if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1))
  {
    throw UsageError("Adam betas must lie in [0, 1)");
  }
  if (!(epsilon > 0))
  {
    throw UsageError("Adam epsilon must be positive");
  }
}

double LrAt(const TrainConfig &config, int epoch)
{
  if (epoch < 0 || epoch >= config.epochs)
  {
    throw UsageError("epoch " + std::to_string(epoch) + " outside [0, " + std::to_string(config.epochs) + ")");
  }
  return config.base_lr * std::pow(config.gamma, epoch);
}

nlohmann::ordered_json ToJson(const TrainConfig &config)
{
  nlohmann::ordered_json doc;
  doc["base_lr"] = config.base_lr;
  doc["gamma"] = config.gamma;
  doc["epochs"] = config.epochs;
  doc["batch_size"] = config.batch_size;
  doc["beta1"] = config.beta1;
  doc["beta2"] = config.beta2;
  doc["epsilon"] = config.epsilon;
  doc["seed"] = config.seed;
  doc["eval_every_epoch"] = config.eval_every_epoch;
  doc["deterministic"] = config.deterministic;
  return doc;
}

TrainConfig MergeJson(TrainConfig base, const nlohmann::json &doc)
{
  if (!doc.is_object())
  {
    throw UsageError("training config must be a JSON object");
  }
  for (const auto &[key, value] : doc.items())
  {
    try
    {
      if (key == "base_lr") base.base_lr = value.get<double>();
      else if (key == "gamma") base.gamma = value.get<double>();
      else if (key == "epochs") base.epochs = value.get<int>();
      else if (key == "batch_size") base.batch_size = value.get<int>();
      else if (key == "beta1") base.beta1 = value.get<double>();
      else if (key == "beta2") base.beta2 = value.get<double>();
      else if (key == "epsilon") base.epsilon = value.get<double>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "eval_every_epoch") base.eval_every_epoch = value.get<bool>();
      else if (key == "deterministic") base.deterministic = value.get<bool>();
      else throw UsageError("unknown training config key '" + key + "'");
    }
    catch (const nlohmann::json::exception &e)
    {
      throw UsageError("bad value for '" + key + "': " + e.what());
    }
  }
  return base;
}

}  // namespace herbclf::train
