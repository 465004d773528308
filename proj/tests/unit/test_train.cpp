// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "checks.hpp"
#include "herbclf/error.hpp"
#include "herbclf/rng.hpp"
#include "herbclf/train/adam.hpp"
#include "herbclf/train/batches.hpp"
#include "herbclf/train/checkpoint.hpp"
#include "herbclf/train/config.hpp"
#include "herbclf/train/loss.hpp"
#include "herbclf/train/trainer.hpp"
#include "herbclf/zoo/scratch_cnn.hpp"
#include "synthetic.hpp"

namespace herbclf::train
{
namespace
{

namespace fs = std::filesystem;

// Logits = W * channel_means + b. Small enough for many-epoch loops.
class ChannelMeanModel final : public zoo::Model<double>
{
public:
  ChannelMeanModel(int k, bool poison = false)
      : spec_(zoo::ModelSpec::For(zoo::Architecture::scratch, k)), w_(static_cast<std::size_t>(k) * 3),
        b_(static_cast<std::size_t>(k)), gw_(w_.size()), gb_(b_.size()), poison_(poison)
  {
    Rng rng(1);
    for (auto &v : w_) v = rng.Uniform(-0.1, 0.1);
  }
  const zoo::ModelSpec &spec() const noexcept override { return spec_; }
  void Backward(const nn::Tensor<double> &g) override
  {
    const std::size_t k = b_.size();
    for (std::size_t r = 0; r < g.dim(0); ++r)
      for (std::size_t o = 0; o < k; ++o)
      {
        gb_[o] += g[r * k + o];
        for (std::size_t c = 0; c < 3; ++c) gw_[o * 3 + c] += g[r * k + o] * features_[r * 3 + c];
      }
  }
  std::vector<zoo::ParamView<double>> Parameters() override
  {
    return {{"head.weight", {b_.size(), 3}, w_, gw_}, {"head.bias", {b_.size()}, b_, gb_}};
  }
  void ZeroGrad() override
  {
    std::fill(gw_.begin(), gw_.end(), 0.0);
    std::fill(gb_.begin(), gb_.end(), 0.0);
  }
  void SetTraining(bool t) override { training_ = t; }
  bool training() const noexcept override { return training_; }
  std::vector<zoo::NamedTensor<double>> State() const override
  {
    return {{"head.weight", {b_.size(), 3}, w_}, {"head.bias", {b_.size()}, b_}};
  }
  void LoadState(const std::vector<zoo::NamedTensor<double>> &s) override
  {
    w_ = s.at(0).values;
    b_ = s.at(1).values;
  }
  std::string head_prefix() const override { return "head."; }
  int forward_calls = 0;

protected:
  nn::Tensor<double> ForwardImpl(const nn::Tensor<double> &x) override
  {
    ++forward_calls;
    const std::size_t n = x.dim(0), plane = x.dim(2) * x.dim(3), k = b_.size();
    features_.assign(n * 3, 0.0);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < 3; ++c)
      {
        double s = 0;
        for (std::size_t i = 0; i < plane; ++i) s += x[(r * 3 + c) * plane + i];
        features_[r * 3 + c] = s / static_cast<double>(plane);
      }
    nn::Tensor<double> y({n, k});
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t o = 0; o < k; ++o)
      {
        double s = b_[o];
        for (std::size_t c = 0; c < 3; ++c) s += w_[o * 3 + c] * features_[r * 3 + c];
        y[r * k + o] = poison_ && forward_calls > 3 ? std::numeric_limits<double>::quiet_NaN() : s;
      }
    return y;
  }

private:
  zoo::ModelSpec spec_;
  std::vector<double> w_, b_, gw_, gb_, features_;
  bool poison_;
  bool training_ = false;
};

const std::vector<std::array<std::uint8_t, 3>> kRedBlue{{220, 30, 30}, {30, 30, 220}};

// config ---------------------------------------------------------------------

TEST(Schedule, SpotValues)
{
  const TrainConfig config;
  EXPECT_DOUBLE_EQ(LrAt(config, 0), 0.001);
  EXPECT_NEAR(LrAt(config, 1), 0.0009, 1e-18);
  EXPECT_NEAR(LrAt(config, 10), 3.486784401e-4, 1e-15);
  for (int e = 0; e < 50; ++e)
  {
    double expected = 0.001;
    for (int i = 0; i < e; ++i) expected *= 0.9;
    EXPECT_NEAR(LrAt(config, e) / expected, 1.0, 1e-12) << e;
  }
  EXPECT_THROW(LrAt(config, -1), UsageError);
  EXPECT_THROW(LrAt(config, 50), UsageError);
}

TEST(Config, ValidationAndMerge)
{
  TrainConfig bad;
  bad.epochs = 0;
  EXPECT_THROW(bad.Validate(), UsageError);
  bad = {};
  bad.gamma = 0;
  EXPECT_THROW(bad.Validate(), UsageError);
  bad = {};
  bad.batch_size = 0;
  EXPECT_THROW(bad.Validate(), UsageError);

  const auto merged = MergeJson(TrainConfig{}, nlohmann::json{{"epochs", 3}, {"base_lr", 0.01}});
  EXPECT_EQ(merged.epochs, 3);
  EXPECT_DOUBLE_EQ(merged.base_lr, 0.01);
  EXPECT_DOUBLE_EQ(merged.gamma, 0.9);
  EXPECT_THROW(MergeJson(TrainConfig{}, nlohmann::json{{"learning_rate", 1}}), UsageError);
  EXPECT_EQ(MergeJson(TrainConfig{}, ToJson(merged)).epochs, 3);
}

// loss -----------------------------------------------------------------------

TEST(Loss, UniformLogitsGiveLogK)
{
  for (std::size_t k : {2u, 100u, 200u})
  {
    nn::Tensor<double> logits({3, k}, 0.25);
    const std::vector<int> labels{0, 1, static_cast<int>(k) - 1};
    EXPECT_NEAR(CrossEntropy(logits, labels), std::log(static_cast<double>(k)), 1e-12);
    nn::Tensor<float> f({1, k}, -3.0f);
    EXPECT_NEAR(CrossEntropy(f, std::vector<int>{1}), std::log(static_cast<double>(k)), 1e-6);
  }
}

TEST(Loss, SaturatedAndLargeLogitsAreStable)
{
  nn::Tensor<double> logits({1, 3}, std::vector<double>{100, 0, 0});
  EXPECT_LT(CrossEntropy(logits, std::vector<int>{0}), 1e-9);
  nn::Tensor<float> huge({1, 2}, std::vector<float>{1e30f, 0});
  EXPECT_TRUE(std::isfinite(CrossEntropy(huge, std::vector<int>{1})));
}

TEST(Loss, LabelOutOfRangeIsDataError)
{
  nn::Tensor<double> logits({2, 3});
  EXPECT_THROW(CrossEntropy(logits, std::vector<int>{0, 3}), DataError);
  EXPECT_THROW(CrossEntropy(logits, std::vector<int>{0}), DataError);
}

TEST(Loss, SoftmaxRowsSumToOne)
{
  Rng rng(3);
  nn::Tensor<double> logits({5, 7});
  for (auto &v : logits.values()) v = rng.Uniform(-20, 20);
  const auto p = Softmax(logits);
  for (std::size_t r = 0; r < 5; ++r)
  {
    double s = 0;
    for (std::size_t k = 0; k < 7; ++k)
    {
      EXPECT_GE(p[r * 7 + k], 0);
      s += p[r * 7 + k];
    }
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(Loss, GradientMatchesFiniteDifferences)
{
  Rng rng(4);
  nn::Tensor<double> logits({4, 6});
  for (auto &v : logits.values()) v = rng.Uniform(-3, 3);
  const std::vector<int> labels{1, 5, 0, 2};
  nn::Tensor<double> grad;
  CrossEntropy(logits, labels, &grad);
  for (std::size_t i = 0; i < logits.size(); ++i)
  {
    auto plus = logits, minus = logits;
    plus[i] += 1e-6;
    minus[i] -= 1e-6;
    const double fd = (CrossEntropy(plus, labels) - CrossEntropy(minus, labels)) / 2e-6;
    EXPECT_NEAR(grad[i], fd, 1e-8) << i;
  }
}

TEST(Loss, AccuracyAndArgmax)
{
  nn::Tensor<double> logits({4, 2}, std::vector<double>{1, 0, 0, 1, 2, 1, 0, 3});
  EXPECT_DOUBLE_EQ(BatchAccuracy(logits, std::vector<int>{0, 1, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(BatchAccuracy(logits, std::vector<int>{1, 0, 1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(BatchAccuracy(logits, std::vector<int>{0, 1, 0, 0}), 0.75);
  nn::Tensor<double> tie({1, 3}, std::vector<double>{2, 5, 5});
  EXPECT_EQ(Argmax(tie), std::vector<int>{1});
}

// optimizer ---------------------------------------------------------------

TEST(Adam, MatchesClosedFormSteps)
{
  std::vector<double> value{1.0, -2.0}, grad{0.5, -0.25};
  std::vector<zoo::ParamView<double>> params{{"p", {2}, value, grad}};
  Adam<double> adam(0.9, 0.999, 1e-8);
  double m[2] = {0, 0}, v[2] = {0, 0}, ref[2] = {1.0, -2.0};
  for (int t = 1; t <= 5; ++t)
  {
    grad = {0.5 / t, -0.25 * t};
    adam.Step(params, 0.01);
    for (int i = 0; i < 2; ++i)
    {
      m[i] = 0.9 * m[i] + 0.1 * grad[i];
      v[i] = 0.999 * v[i] + 0.001 * grad[i] * grad[i];
      const double mh = m[i] / (1 - std::pow(0.9, t)), vh = v[i] / (1 - std::pow(0.999, t));
      ref[i] -= 0.01 * mh / (std::sqrt(vh) + 1e-8);
      EXPECT_NEAR(value[i], ref[i], 1e-15) << "step " << t;
    }
  }
  EXPECT_EQ(adam.steps(), 5);
  // The first bias-corrected step moves each coordinate by ~lr in the sign direction.
  std::vector<double> fresh{0.0}, g{123.0};
  Adam<double> first(0.9, 0.999, 1e-8);
  first.Step({{"q", {1}, fresh, g}}, 0.001);
  EXPECT_NEAR(fresh[0], -0.001, 1e-12);
}

// batches ------------------------------------------------------------------

TEST(Batches, NchwLayoutAndNormalization)
{
  data::LabeledImages images;
  images.resolution = 2;
  images.labels = {0, 1};
  images.ids = {"a", "b"};
  for (std::uint8_t i = 0; i < 24; ++i) images.pixels.push_back(static_cast<std::uint8_t>(i * 10));
  data::PreprocessConfig cfg;
  cfg.target_resolution = 2;
  const std::vector<std::size_t> rows{1};
  const auto batch = MakeBatch<double>(images, rows, cfg);
  EXPECT_EQ(batch.shape(), (nn::Shape{1, 3, 2, 2}));
  // Sample 1, channel 2, pixel (0, 1) is HWC byte 12 + (0*2+1)*3 + 2 = 17.
  EXPECT_DOUBLE_EQ(batch[2 * 4 + 1], static_cast<double>(cfg.Normalize(170, 2)));
  EXPECT_EQ(LabelsOf(images, rows), std::vector<int>{1});
}

// trainer ------------------------------------------------------------------

TEST(Trainer, HistoryFollowsScheduleAndEvalPolicy)
{
  const auto train_set = testing::BlobImages(kRedBlue, 5, 128, 1);
  const auto test_set = testing::BlobImages(kRedBlue, 2, 128, 2);
  TrainConfig config;
  config.epochs = 7;
  config.batch_size = 4;
  ChannelMeanModel model(2);
  const auto result = Train(model, train_set, test_set, config, {});
  ASSERT_EQ(result.history.size(), 7u);
  for (int e = 0; e < 7; ++e)
  {
    EXPECT_EQ(result.history[e].epoch, e);
    EXPECT_DOUBLE_EQ(result.history[e].lr, LrAt(config, e));
    EXPECT_FALSE(std::isnan(result.history[e].test_accuracy));
  }
  EXPECT_FALSE(model.training());

  config.eval_every_epoch = false;
  ChannelMeanModel lazy(2);
  const auto sparse = Train(lazy, train_set, test_set, config, {});
  for (int e = 0; e < 6; ++e) EXPECT_TRUE(std::isnan(sparse.history[e].test_loss));
  EXPECT_FALSE(std::isnan(sparse.history[6].test_loss));
  EXPECT_EQ(sparse.best_epoch, 6);
}

TEST(Trainer, DeterministicForFixedSeed)
{
  const auto train_set = testing::BlobImages(kRedBlue, 3, 128, 5);
  const auto test_set = testing::BlobImages(kRedBlue, 1, 128, 6);
  TrainConfig config;
  config.epochs = 2;
  config.batch_size = 4;
  config.seed = 9;
  auto run = [&] {
    zoo::ScratchCnn<float> model(zoo::ModelSpec::For(zoo::Architecture::scratch, 2), config.seed);
    auto history = Train(model, train_set, test_set, config, {}).history;
    return std::make_pair(history, model.State());
  };
  const auto a = run(), b = run();
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
}

TEST(Trainer, NonFiniteLossNamesEpoch)
{
  const auto images = testing::BlobImages(kRedBlue, 4, 128, 7);
  TrainConfig config;
  config.epochs = 3;
  config.batch_size = 8;
  ChannelMeanModel model(2, /*poison=*/true);
  try
  {
    Train(model, images, images, config, {});
    FAIL() << "expected NumericError";
  }
  catch (const NumericError &e)
  {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos) << e.what();
  }
}

TEST(Trainer, RejectsMismatchedPartitions)
{
  auto images = testing::BlobImages(kRedBlue, 1, 64, 7);
  ChannelMeanModel model(2);
  EXPECT_THROW(Train(model, images, images, TrainConfig{}, {}), DataError);
}

TEST(Trainer, KeepsOnlyBestAndLastCheckpoints)
{
  testing::TempDir dir;
  const auto train_set = testing::BlobImages(kRedBlue, 4, 128, 1);
  const auto test_set = testing::BlobImages(kRedBlue, 3, 128, 2);
  TrainConfig config;
  config.epochs = 12;
  config.base_lr = 0.05;
  ChannelMeanModel model(2);
  TrainOptions options;
  options.checkpoint_dir = dir.path();
  options.dataset_name = "toy";
  options.class_names = {"blue", "red"};
  const auto result = Train(model, train_set, test_set, config, {}, options);
  ASSERT_GE(result.best_epoch, 0);
  EXPECT_EQ(result.best_checkpoint.filename(), CheckpointFileName(zoo::Architecture::scratch, "toy", result.best_epoch));
  EXPECT_EQ(result.last_checkpoint.filename(), "scratch_toy_11.ckpt");
  std::size_t files = 0;
  for (const auto &e : fs::directory_iterator(dir.path())) files += e.is_regular_file();
  EXPECT_EQ(files, result.best_epoch == 11 ? 1u : 2u);

  double best = -1;
  for (const auto &m : result.history) best = std::max(best, m.test_accuracy);
  EXPECT_EQ(result.history[result.best_epoch].test_accuracy, best);
  for (int e = 0; e < result.best_epoch; ++e) EXPECT_LT(result.history[e].test_accuracy, best);

  const auto info = ReadCheckpointInfo(result.best_checkpoint);
  EXPECT_EQ(info.epoch, result.best_epoch);
  EXPECT_EQ(info.dataset, "toy");
  EXPECT_EQ(info.class_names, options.class_names);
  EXPECT_EQ(info.dtype, "f64");
}

TEST(Checkpoint, RoundTripIsExact)
{
  testing::TempDir dir;
  zoo::ScratchCnn<float> model(zoo::ModelSpec::For(zoo::Architecture::scratch, 4), 3);
  CheckpointInfo info;
  info.spec = model.spec();
  info.seed = 3;
  info.epoch = 17;
  info.dataset = "indoherb";
  info.class_names = {"a", "b", "c", "d"};
  info.normalization = data::Normalization::unit_range_then_standardize;
  const auto path = dir / "m.ckpt";
  SaveCheckpoint(path, info, model.State());
  const auto back = ReadCheckpointInfo(path);
  EXPECT_EQ(back.spec, info.spec);
  EXPECT_EQ(back.seed, 3u);
  EXPECT_EQ(back.epoch, 17);
  EXPECT_EQ(back.class_names, info.class_names);
  EXPECT_EQ(back.normalization, info.normalization);
  EXPECT_EQ(back.dtype, "f32");
  EXPECT_EQ(ReadCheckpointState<float>(path), model.State());
  const auto widened = ReadCheckpointState<double>(path);
  const auto original = model.State();
  ASSERT_EQ(widened.size(), original.size());
  for (std::size_t i = 0; i < widened.size(); ++i)
  {
    EXPECT_EQ(widened[i].shape, original[i].shape);
    ASSERT_EQ(widened[i].values.size(), original[i].values.size());
    for (std::size_t j = 0; j < widened[i].values.size(); ++j)
      ASSERT_EQ(widened[i].values[j], static_cast<double>(original[i].values[j]));
  }
  EXPECT_FALSE(fs::exists(dir / "m.ckpt.partial"));

  std::ofstream(dir / "junk.ckpt") << "not a checkpoint";
  EXPECT_THROW(ReadCheckpointInfo(dir / "junk.ckpt"), DataError);
  EXPECT_EQ(CheckpointFileName(zoo::Architecture::convnext_base, "indoherb", 4), "convnext_base_indoherb_4.ckpt");
}

// scratch model: hand-rolled gradients and capacity ------------------------

TEST(ScratchGradients, DirectionalDerivativesMatchCentralDifferences)
{
  const auto checks = testing::ScratchGradientCheck(2026, 10);
  ASSERT_EQ(checks.size(), 10u + 10u);
  for (const auto &c : checks)
  {
    EXPECT_LE(c.relative_error, 1e-3) << c.label << " analytic " << c.analytic << " fd " << c.finite_difference;
  }
}

TEST(ScratchGradients, OverfitsEightImages)
{
  const auto outcome = testing::ScratchOverfit(0, 200);
  ASSERT_EQ(outcome.history.size(), 200u);
  EXPECT_EQ(outcome.final_train_accuracy, 1.0);
  EXPECT_GE(outcome.first_perfect_epoch, 0);
  EXPECT_LT(outcome.history.back().train_loss, outcome.history.front().train_loss);
}

}  // namespace
}  // namespace herbclf::train
