// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "herbclf/error.hpp"
#include "herbclf/rng.hpp"
#include "herbclf/train/adam.hpp"
#include "herbclf/train/batches.hpp"
#include "herbclf/train/checkpoint.hpp"
#include "herbclf/train/loss.hpp"
#include "herbclf/zoo/backbone.hpp"

namespace herbclf::train
{

namespace
{

template <typename T>
void CheckPartition(const zoo::Model<T> &model, const data::LabeledImages &images, const char *what)
{
  if (images.size() == 0)
  {
    throw DataError(std::string(what) + " partition is empty");
  }
  if (images.resolution != model.spec().input_resolution)
  {
    throw DataError(std::string(what) + " images are " + std::to_string(images.resolution) + "^2 but " +
                    std::string(zoo::ToString(model.spec().architecture)) + " expects " +
                    std::to_string(model.spec().input_resolution) + "^2");
  }
  for (int y : images.labels)
  {
    if (y < 0 || y >= model.spec().num_classes)
    {
      throw DataError(std::string(what) + " label " + std::to_string(y) + " exceeds the model's " +
                      std::to_string(model.spec().num_classes) + " classes");
    }
  }
}

class ModeGuard
{
public:
  template <typename M>
  ModeGuard(M &model, bool training) : restore_([&model, was = model.training()] { model.SetTraining(was); })
  {
    model.SetTraining(training);
  }
  ~ModeGuard() { restore_(); }
  ModeGuard(const ModeGuard &) = delete;
  ModeGuard &operator=(const ModeGuard &) = delete;

private:
  std::function<void()> restore_;
};

}  // namespace

template <typename T>
PassResult EvaluatePass(zoo::Model<T> &model, const data::LabeledImages &images, const data::PreprocessConfig &config,
                        std::size_t batch_size)
{
  CheckPartition(model, images, "evaluated");
  ModeGuard guard(model, false);
  PassResult out;
  out.predictions.reserve(images.size());
  double loss_sum = 0;
  std::size_t hits = 0;
  std::vector<std::size_t> rows;
  for (std::size_t start = 0; start < images.size(); start += batch_size)
  {
    rows.resize(std::min(batch_size, images.size() - start));
    std::iota(rows.begin(), rows.end(), start);
    const auto labels = LabelsOf(images, rows);
    const auto logits = model.Forward(MakeBatch<T>(images, rows, config));
    loss_sum += CrossEntropy(logits, labels) * static_cast<double>(rows.size());
    for (std::size_t i = 0; const int p : Argmax(logits))
    {
      hits += p == labels[i++];
      out.predictions.push_back(p);
    }
  }
  out.loss = loss_sum / static_cast<double>(images.size());
  out.accuracy = static_cast<double>(hits) / static_cast<double>(images.size());
  return out;
}

template <typename T>
TrainResult Train(zoo::Model<T> &model, const data::LabeledImages &train_set, const data::LabeledImages &test_set,
                  const TrainConfig &config, const data::PreprocessConfig &preprocess, const TrainOptions &options)
{
  config.Validate();
  preprocess.Validate();
  CheckPartition(model, train_set, "train");
  CheckPartition(model, test_set, "test");
  if (config.deterministic)
  {
    zoo::SetBackboneDeterminism(true);
  }

  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  const std::uint64_t shuffle_seed = DeriveSeed(config.seed, "epoch-shuffle");
  Adam<T> adam(config.beta1, config.beta2, config.epsilon);

  CheckpointInfo info;
  info.spec = model.spec();
  info.seed = config.seed;
  info.dataset = options.dataset_name;
  info.class_names = options.class_names;
  info.normalization = preprocess.normalization;

  TrainResult result;
  double best_accuracy = -1;
  std::vector<std::size_t> order(train_set.size());
  std::vector<std::size_t> rows;
  for (int epoch = 0; epoch < config.epochs; ++epoch)
  {
    EpochMetrics m;
    m.epoch = epoch;
    m.lr = LrAt(config, epoch);

    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(DeriveSeed(shuffle_seed, static_cast<std::uint64_t>(epoch)));
    rng.Shuffle(order.begin(), order.end());

    double running_loss = 0;
    double running_hits = 0;
    {
      ModeGuard guard(model, true);
      for (std::size_t start = 0, batch = 0; start < order.size(); start += batch_size, ++batch)
      {
        rows.assign(order.begin() + static_cast<std::ptrdiff_t>(start),
                    order.begin() + static_cast<std::ptrdiff_t>(std::min(start + batch_size, order.size())));
        const auto labels = LabelsOf(train_set, rows);
        model.ZeroGrad();
        nn::Tensor<T> grad;
        nn::Tensor<T> logits;
        try
        {
          logits = model.Forward(MakeBatch<T>(train_set, rows, preprocess));
        }
        catch (const NumericError &e)
        {
          throw NumericError(std::string(e.what()) + " (epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch) + ")");
        }
        const double loss = CrossEntropy(logits, labels, &grad);
        if (!std::isfinite(loss))
        {
          throw NumericError("non-finite training loss at epoch " + std::to_string(epoch) + ", batch " +
                             std::to_string(batch));
        }
        model.Backward(grad);
        adam.Step(model.Parameters(), m.lr);
        running_loss += loss * static_cast<double>(rows.size());
        running_hits += BatchAccuracy(logits, labels) * static_cast<double>(rows.size());
      }
    }

    const bool last = epoch + 1 == config.epochs;
    if (config.eval_every_epoch || last)
    {
      const auto train_pass = EvaluatePass(model, train_set, preprocess, batch_size);
      const auto test_pass = EvaluatePass(model, test_set, preprocess, batch_size);
      m.train_loss = train_pass.loss;
      m.train_accuracy = train_pass.accuracy;
      m.test_loss = test_pass.loss;
      m.test_accuracy = test_pass.accuracy;
    }
    else
    {
      m.train_loss = running_loss / static_cast<double>(order.size());
      m.train_accuracy = running_hits / static_cast<double>(order.size());
      m.test_loss = std::numeric_limits<double>::quiet_NaN();
      m.test_accuracy = std::numeric_limits<double>::quiet_NaN();
    }
    if (!std::isfinite(m.train_loss) || (!std::isnan(m.test_loss) && !std::isfinite(m.test_loss)))
    {
      throw NumericError("non-finite evaluation loss at epoch " + std::to_string(epoch));
    }
    result.history.push_back(m);

    if (!std::isnan(m.test_accuracy) && m.test_accuracy > best_accuracy)
    {
      best_accuracy = m.test_accuracy;
      const auto previous = result.best_checkpoint;
      result.best_epoch = epoch;
      if (!options.checkpoint_dir.empty())
      {
        info.epoch = epoch;
        result.best_checkpoint =
            options.checkpoint_dir / CheckpointFileName(info.spec.architecture, info.dataset, epoch);
        SaveCheckpoint(result.best_checkpoint, info, model.State());
        if (!previous.empty() && previous != result.best_checkpoint)
        {
          std::filesystem::remove(previous);
        }
      }
    }
    if (last && !options.checkpoint_dir.empty())
    {
      info.epoch = epoch;
      result.last_checkpoint = options.checkpoint_dir / CheckpointFileName(info.spec.architecture, info.dataset, epoch);
      if (result.last_checkpoint != result.best_checkpoint)
      {
        SaveCheckpoint(result.last_checkpoint, info, model.State());
      }
    }
    if (options.on_epoch)
    {
      options.on_epoch(m);
    }
  }
  return result;
}

template PassResult EvaluatePass(zoo::Model<float> &, const data::LabeledImages &, const data::PreprocessConfig &,
                                 std::size_t);
template PassResult EvaluatePass(zoo::Model<double> &, const data::LabeledImages &, const data::PreprocessConfig &,
                                 std::size_t);
template TrainResult Train(zoo::Model<float> &, const data::LabeledImages &, const data::LabeledImages &,
                           const TrainConfig &, const data::PreprocessConfig &, const TrainOptions &);
template TrainResult Train(zoo::Model<double> &, const data::LabeledImages &, const data::LabeledImages &,
                           const TrainConfig &, const data::PreprocessConfig &, const TrainOptions &);

}  // namespace herbclf::train
