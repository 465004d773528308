// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and runtime
// budgets are fixed below. Exit status is non-zero if any line fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "herbclf/augment/balance.hpp"
#include "herbclf/augment/ops.hpp"
#include "herbclf/data/dataset.hpp"
#include "herbclf/data/split.hpp"
#include "herbclf/error.hpp"
#include "herbclf/eval/metrics.hpp"
#include "herbclf/rng.hpp"
#include "herbclf/train/config.hpp"
#include "herbclf/train/loss.hpp"
#include "herbclf/train/trainer.hpp"
#include "herbclf/zoo/backbone.hpp"
#include "herbclf/zoo/build.hpp"
#include "herbclf/zoo/scratch_cnn.hpp"
#include "synthetic.hpp"

namespace herbclf
{
namespace
{

namespace fs = std::filesystem;

constexpr double kLrRelTol = 1e-12;
constexpr double kLrSpotTol = 5e-10;  // half a unit in the sixth significant digit of 3.48678e-4
constexpr double kCrossEntropyTol = 1e-6;
constexpr double kMetricsTol = 1e-12;
constexpr double kWorkedExampleTol = 5e-6;  // values quoted to five decimals
constexpr double kGradRelTol = 1e-3;
constexpr int kGradDirections = 10;
constexpr int kOverfitEpochs = 200;
constexpr int kOrderingEpochs = 10;
constexpr int kOrderingClasses = 5;
constexpr int kOrderingPerClass = 40;

struct Outcome
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string Fmt(const char *fmt, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

// 1 -------------------------------------------------------------------------
Outcome LrSchedule()
{
  const train::TrainConfig config;
  double worst = 0, oracle = 0.001;
  for (int e = 0; e < 50; ++e)
  {
    worst = std::max(worst, std::abs(train::LrAt(config, e) - oracle) / oracle);
    oracle *= 0.9;
  }
  const double e0 = train::LrAt(config, 0), e1 = train::LrAt(config, 1), e10 = train::LrAt(config, 10);
  const bool spots = std::abs(e0 - 0.001) <= kLrSpotTol && std::abs(e1 - 0.0009) <= kLrSpotTol &&
                     std::abs(e10 - 3.48678e-4) <= kLrSpotTol;
  return {worst <= kLrRelTol && spots, "max rel err " + Fmt("%.2e", worst) + ", lr(10)=" + Fmt("%.9g", e10)};
}

// 2 -------------------------------------------------------------------------
Outcome CrossEntropyValues()
{
  double worst = 0;
  for (std::size_t k : {2u, 100u, 200u})
  {
    nn::Tensor<float> logits({4, k}, 0.5f);
    const std::vector<int> labels{0, 1, 0, static_cast<int>(k) - 1};
    worst = std::max(worst, std::abs(train::CrossEntropy(logits, labels) - std::log(static_cast<double>(k))));
  }
  return {worst <= kCrossEntropyTol, "max |CE - ln K| " + Fmt("%.2e", worst)};
}

// 3 -------------------------------------------------------------------------
Outcome AugmentationAlgebra()
{
  using augment::AugmentationOp;
  Rng rng(31);
  int identity_failures = 0;
  for (int i = 0; i < 100; ++i)
  {
    const int n = 2 + static_cast<int>(rng.Below(63));
    const auto img = testing::NoiseImage(rng, n, n);
    auto twice = [&](AugmentationOp op) { return augment::ApplyOp(augment::ApplyOp(img, op), op); };
    auto r = img;
    for (int j = 0; j < 4; ++j) r = augment::ApplyOp(r, AugmentationOp::rot90);
    identity_failures += twice(AugmentationOp::hflip) != img;
    identity_failures += twice(AugmentationOp::vflip) != img;
    identity_failures += r != img;
  }

  const auto plan = augment::PlanBalance(testing::InMemoryIndex({{"deficit", 30}}), 100, 0);
  const std::size_t planned = plan[0].assignments.size();

  testing::TempDir dir;
  testing::WriteCorpus(dir.path(), {{"a", 30}, {"b", 64}, {"c", 100}}, 5,
                       [](Rng &r, int) { return testing::SmoothImage(r, 48, 48); });
  auto index = data::LoadIndex(dir.path());
  for (const auto &p : augment::PlanBalance(index, 100, 0)) augment::Materialize(p, index);
  const auto balanced = data::LoadIndex(dir.path());
  bool exact = true;
  for (const auto &c : balanced.classes()) exact = exact && balanced.count(c) == 100;

  return {identity_failures == 0 && planned == 70 && exact,
          std::to_string(identity_failures) + " identity failures, 30->100 planned " + std::to_string(planned) +
              ", balanced exact " + (exact ? "yes" : "no")};
}

// 4 -------------------------------------------------------------------------
Outcome SplitProperties()
{
  const auto hundred = data::StratifiedSplit(testing::InMemoryIndex({{"x", 100}}), 0.6, 0);
  bool ok = hundred.train_ids.size() == 60 && hundred.test_ids.size() == 40;
  Rng rng(404);
  int violations = 0;
  for (int corpus = 0; corpus < 50; ++corpus)
  {
    std::map<std::string, std::size_t> counts;
    const int classes = 1 + static_cast<int>(rng.Below(12));
    for (int c = 0; c < classes; ++c) counts["k" + std::to_string(c)] = 2 + rng.Below(249);
    const auto index = testing::InMemoryIndex(counts);
    const std::uint64_t seed = rng.Next();
    const auto split = data::StratifiedSplit(index, 0.6, seed);
    std::set<std::string> all;
    for (const auto &id : split.train_ids) all.insert(id);
    for (const auto &id : split.test_ids) violations += !all.insert(id).second;  // disjoint
    violations += all.size() != index.total();                                    // coverage
    for (const auto &[name, n] : counts)
    {
      std::size_t train = 0;
      for (const auto &s : index.samples(name)) train += split.train_ids.count(s.sample_id);
      violations += train != data::TrainCountFor(n, 0.6);
    }
    violations += !(data::StratifiedSplit(index, 0.6, seed) == split);  // determinism
  }
  ok = ok && violations == 0;
  return {ok, "100 -> " + std::to_string(hundred.train_ids.size()) + "/" + std::to_string(hundred.test_ids.size()) +
                  ", " + std::to_string(violations) + " violations over 50 corpora"};
}

// 5 -------------------------------------------------------------------------
Outcome MetricsOracle()
{
  Rng rng(5005);
  double worst = 0;
  for (int trial = 0; trial < 1000; ++trial)
  {
    const int k = 2 + static_cast<int>(rng.Below(12));
    const std::size_t n = 1 + rng.Below(300);
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i)
    {
      truth[i] = static_cast<int>(rng.Below(static_cast<std::uint64_t>(k)));
      pred[i] = rng.Below(2) ? truth[i] : static_cast<int>(rng.Below(static_cast<std::uint64_t>(k)));
    }
    const auto got = eval::MetricsFromConfusion(eval::Confusion(pred, truth, k));
    double p = 0, r = 0, f = 0, hits = 0;
    int present = 0;
    for (std::size_t i = 0; i < n; ++i) hits += pred[i] == truth[i];
    for (int c = 0; c < k; ++c)
    {
      double tp = 0, fp = 0, fn = 0;
      for (std::size_t i = 0; i < n; ++i)
      {
        tp += pred[i] == c && truth[i] == c;
        fp += pred[i] == c && truth[i] != c;
        fn += pred[i] != c && truth[i] == c;
      }
      if (tp + fn == 0) continue;
      ++present;
      const double pc = tp + fp > 0 ? tp / (tp + fp) : 0, rc = tp / (tp + fn);
      p += pc;
      r += rc;
      f += pc + rc > 0 ? 2 * pc * rc / (pc + rc) : 0;
    }
    for (double d : {got.accuracy - hits / static_cast<double>(n), got.macro_precision - p / present,
                     got.macro_recall - r / present, got.macro_f1 - f / present})
    {
      worst = std::max(worst, std::abs(d));
    }
  }
  eval::ConfusionMatrix m(2);
  m.at(0, 0) = 3;
  m.at(0, 1) = 1;
  m.at(1, 0) = 2;
  m.at(1, 1) = 4;
  const auto ex = eval::MetricsFromConfusion(m);
  const bool example = std::abs(ex.macro_precision - 0.7) <= kWorkedExampleTol &&
                       std::abs(ex.macro_recall - 0.70833) <= kWorkedExampleTol &&
                       std::abs(ex.macro_f1 - 0.69697) <= kWorkedExampleTol;
  return {worst <= kMetricsTol && example, "max deviation " + Fmt("%.2e", worst) + ", example P/R/F1 " +
                                               Fmt("%.5f", ex.macro_precision) + "/" + Fmt("%.5f", ex.macro_recall) +
                                               "/" + Fmt("%.5f", ex.macro_f1)};
}

// 6 -------------------------------------------------------------------------
Outcome ScratchShapeAndOverfit()
{
  zoo::ScratchCnn<float> model(zoo::ModelSpec::For(zoo::Architecture::scratch, 100), 0);
  nn::Tensor<float> x({3, 3, 128, 128}, 0.5f);
  const auto shape = model.Forward(x).shape();
  const bool shape_ok = shape == nn::Shape{3, 100};

  const auto outcome = testing::ScratchOverfit(0, kOverfitEpochs);
  const double first = outcome.history.front().train_loss, last = outcome.history.back().train_loss;
  const bool fit = outcome.final_train_accuracy == 1.0 && outcome.first_perfect_epoch >= 0 && last < first;
  return {shape_ok && fit, "logits " + nn::ToString(shape) + ", train acc " + Fmt("%.3f", outcome.final_train_accuracy) +
                               " (first 1.0 at epoch " + std::to_string(outcome.first_perfect_epoch) + "), loss " +
                               Fmt("%.4g", first) + " -> " + Fmt("%.4g", last)};
}

// 7 -------------------------------------------------------------------------
Outcome GradientSanity()
{
  const auto checks = testing::ScratchGradientCheck(2026, kGradDirections);
  double worst = 0;
  int random = 0;
  for (const auto &c : checks)
  {
    worst = std::max(worst, c.relative_error);
    random += c.label == "all";
  }
  return {random == kGradDirections && worst <= kGradRelTol,
          std::to_string(random) + " random + " + std::to_string(checks.size() - random) +
              " per-tensor directions, max rel err " + Fmt("%.2e", worst)};
}

// 8 -------------------------------------------------------------------------
data::LabeledImages Subset(const std::vector<data::LabeledImages> &per_class, std::size_t begin, std::size_t end)
{
  data::LabeledImages out;
  out.resolution = per_class.front().resolution;
  for (const auto &c : per_class)
    for (std::size_t i = begin; i < end; ++i)
    {
      const auto row = c.row(i);
      out.pixels.insert(out.pixels.end(), row.begin(), row.end());
      out.labels.push_back(c.labels[i]);
      out.ids.push_back(c.ids[i]);
    }
  return out;
}

Outcome OrderingCheck()
{
  const auto artifact = zoo::ArtifactPath(zoo::Architecture::resnet34, zoo::DefaultWeightsDir());
  std::string source = "missing";
  if (zoo::BackbonesSupported() && fs::is_regular_file(artifact)) source = zoo::ReadArtifactInfo(artifact).source;
  if (source != "published")
  {
    return {false, "blocked: published resnet34 weights required at " + artifact.string() + " (found: " + source +
                       "); fetch them with tools/export_backbone.py --arch resnet34"};
  }

  // Optional real corpus: the first five classes, first 40 files each.
  std::vector<data::LabeledImages> per_class;
  std::string corpus = "synthetic textured blobs";
  if (const char *real = std::getenv("HERBCLF_ORDERING_CORPUS"))
  {
    const auto index = data::LoadIndex(real);
    corpus = real;
    for (int c = 0; c < kOrderingClasses && c < static_cast<int>(index.num_classes()); ++c)
    {
      std::set<std::string> ids;
      for (const auto &s : index.samples(index.classes()[c]))
        if (ids.size() < kOrderingPerClass) ids.insert(s.sample_id);
      auto images = data::LoadLabeled(index, ids, 128);
      for (auto &y : images.labels) y = c;
      per_class.push_back(std::move(images));
    }
  }
  else
  {
    for (int c = 0; c < kOrderingClasses; ++c)
    {
      data::LabeledImages images;
      images.resolution = 128;
      Rng rng(DeriveSeed(77, static_cast<std::uint64_t>(c)));
      for (int i = 0; i < kOrderingPerClass; ++i)
      {
        const auto img = testing::TexturedBlob(rng, 128, c, kOrderingClasses);
        images.pixels.insert(images.pixels.end(), img.pixels.begin(), img.pixels.end());
        images.labels.push_back(c);
        images.ids.push_back(std::to_string(c) + "/" + std::to_string(i));
      }
      per_class.push_back(std::move(images));
    }
  }
  const std::size_t n_train = data::TrainCountFor(kOrderingPerClass, 0.6);
  const auto train_set = Subset(per_class, 0, n_train);
  const auto test_set = Subset(per_class, n_train, kOrderingPerClass);

  train::TrainConfig config;
  config.epochs = kOrderingEpochs;
  auto final_accuracy = [&](zoo::Architecture arch) {
    auto model = zoo::BuildModel<float>(zoo::ModelSpec::For(arch, kOrderingClasses), 0);
    return train::Train(*model, train_set, test_set, config, data::PreprocessConfig{}).history.back().test_accuracy;
  };
  const double resnet = final_accuracy(zoo::Architecture::resnet34);
  const double scratch = final_accuracy(zoo::Architecture::scratch);
  return {resnet > scratch,
          corpus + ": resnet34 " + Fmt("%.4f", resnet) + " vs scratch " + Fmt("%.4f", scratch) + " test accuracy"};
}

// 9 -------------------------------------------------------------------------
Outcome HeadLocality()
{
  if (!zoo::BackbonesSupported()) return {false, "blocked: built without the backbone runtime"};
  const auto local = testing::TestWeightsDir();
  std::string provenance;
  std::size_t compared = 0;
  double slowest = 0;
  for (auto arch : zoo::kAllArchitectures)
  {
    if (arch == zoo::Architecture::scratch) continue;
    auto artifact = zoo::ArtifactPath(arch, zoo::DefaultWeightsDir());
    std::string source = fs::is_regular_file(artifact) ? zoo::ReadArtifactInfo(artifact).source : "missing";
    if (source != "published")
    {
      if (!local) return {false, "blocked: no artifact for " + std::string(zoo::ToString(arch))};
      artifact = zoo::ArtifactPath(arch, *local);
      source = zoo::ReadArtifactInfo(artifact).source;
    }
    provenance += std::string(provenance.empty() ? "" : ", ") + std::string(zoo::ToString(arch)) + "=" + source;

    const auto start = std::chrono::steady_clock::now();
    const auto reference = zoo::ReadArtifactParameters(artifact);
    std::map<std::string, const zoo::NamedTensor<float> *> by_name;
    for (const auto &t : reference) by_name[t.name] = &t;
    zoo::BuildOptions options;
    options.artifact = artifact;
    auto model = zoo::BuildModel<float>(zoo::ModelSpec::For(arch, 100), 1, options);
    const auto prefix = model->head_prefix();
    for (const auto &p : model->Parameters())
    {
      const auto it = by_name.find(p.name);
      if (it == by_name.end()) return {false, std::string(zoo::ToString(arch)) + ": unknown parameter " + p.name};
      if (p.name.rfind(prefix, 0) == 0)
      {
        if (p.shape.front() != 100) return {false, std::string(zoo::ToString(arch)) + ": head not resized"};
        continue;
      }
      if (p.shape != it->second->shape ||
          std::memcmp(p.value.data(), it->second->values.data(), p.value.size() * sizeof(float)) != 0)
      {
        return {false, std::string(zoo::ToString(arch)) + ": " + p.name + " differs from the artifact"};
      }
      ++compared;
    }
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  const bool published_only = provenance.find("random-init") == std::string::npos;
  return {slowest < 60.0, std::to_string(compared) + " body tensors bit-equal, slowest backbone " +
                              Fmt("%.1f", slowest) + "s; weights: " + provenance +
                              (published_only ? "" : " (published weights unavailable; checked on local exports)")};
}

}  // namespace
}  // namespace herbclf

int main()
{
  using namespace herbclf;
  const std::vector<Criterion> criteria{
      {"LR schedule", 1, LrSchedule},
      {"Cross-entropy analytic values", 1, CrossEntropyValues},
      {"Augmentation algebra", 30, AugmentationAlgebra},
      {"Split properties", 10, SplitProperties},
      {"Metrics oracle", 10, MetricsOracle},
      {"Scratch-model shape and overfit", 300, ScratchShapeAndOverfit},
      {"Gradient sanity", 120, GradientSanity},
      {"Miniature end-to-end ordering check", 1200, OrderingCheck},
      {"Head-replacement locality", 300, HeadLocality},
  };
  int failures = 0;
  for (const auto &c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try
    {
      out = c.run();
    }
    catch (const std::exception &e)
    {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds)
    {
      out.pass = false;
      out.detail += "; over the " + Fmt("%.0f", c.budget_seconds) + "s budget";
    }
    failures += !out.pass;
    std::printf("%s  %s: %s [%.2fs]\n", out.pass ? "PASS" : "FAIL", c.name.c_str(), out.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
