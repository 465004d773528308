// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// Drives the herbclf executable end to end on small synthetic corpora.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "checks.hpp"
#include "herbclf/data/dataset.hpp"
#include "herbclf/eval/artifacts.hpp"
#include "herbclf/hash.hpp"
#include "herbclf/train/checkpoint.hpp"
#include "synthetic.hpp"

namespace herbclf
{
namespace
{

namespace fs = std::filesystem;

struct RunResult
{
  int rc = -1;
  std::string output;
};

std::string Quote(const std::string &s) { return "'" + s + "'"; }

RunResult Cli(const std::vector<std::string> &args)
{
  std::string cmd = Quote(HERBCLF_CLI_PATH);
  for (const auto &a : args) cmd += " " + Quote(a);
  cmd += " 2>&1";
  RunResult r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe)) r.output += buf;
  const int status = pclose(pipe);
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json JsonFile(const fs::path &p) { return nlohmann::json::parse(Slurp(p)); }

void TexturedCorpus(const fs::path &root, int classes, int per_class, std::uint64_t seed)
{
  std::map<std::string, int> counts;
  for (int c = 0; c < classes; ++c) counts["species_" + std::to_string(c)] = per_class;
  testing::WriteCorpus(root, counts, seed, [classes](Rng &rng, int c) { return testing::TexturedBlob(rng, 96, c, classes); });
}

TEST(Cli, HelpAndUsageErrors)
{
  EXPECT_EQ(Cli({"--help"}).rc, 0);
  EXPECT_EQ(Cli({}).rc, 1);
  EXPECT_EQ(Cli({"train"}).rc, 1);
  EXPECT_EQ(Cli({"frobnicate"}).rc, 1);
  testing::TempDir dir;
  const auto r = Cli({"reproduce", dir.path().string(), "--paper-table", "3", "--out", (dir / "o").string()});
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.output.find("--yes-long-run"), std::string::npos) << r.output;
}

TEST(Cli, DataErrorsExitWithTwo)
{
  testing::TempDir dir;
  EXPECT_EQ(Cli({"split", (dir / "missing").string()}).rc, 2);
  TexturedCorpus(dir.path(), 2, 3, 1);
  const auto r = Cli({"prepare", dir.path().string(), "--target-count", "100"});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.output.find("cannot reach"), std::string::npos) << r.output;
}

TEST(Cli, PrepareQuarantinesByteDuplicate)
{
  testing::TempDir dir;
  TexturedCorpus(dir.path(), 2, 6, 2);
  fs::copy_file(dir / "species_0/img_0.png", dir / "species_0/img_copy.png");
  const auto r = Cli({"prepare", dir.path().string(), "--target-count", "8", "--remove-duplicates"});
  ASSERT_EQ(r.rc, 0) << r.output;
  std::size_t quarantined = 0;
  for (const auto &e : fs::recursive_directory_iterator(dir / ".quarantine")) quarantined += e.is_regular_file();
  EXPECT_EQ(quarantined, 1u);
  const auto index = data::LoadIndex(dir.path());
  EXPECT_EQ(index.count("species_0"), 8u);
  EXPECT_EQ(index.count("species_1"), 8u);
  const auto report = JsonFile(dir / ".herbclf/prepare/duplicates.json");
  EXPECT_EQ(report["groups"].size(), 1u);
  EXPECT_TRUE(report["groups"][0]["byte_identical"].get<bool>());
  const auto manifest = JsonFile(dir / ".herbclf/prepare/run.json");
  EXPECT_EQ(manifest["command"], "prepare");
  EXPECT_EQ(manifest["details"]["quarantined"], 1);
}

TEST(Cli, PrepareOnBalancedCorpusChangesNothing)
{
  testing::TempDir dir;
  TexturedCorpus(dir.path(), 3, 4, 3);
  const auto before = data::DatasetDigest(data::LoadIndex(dir.path()));
  const auto r = Cli({"prepare", dir.path().string(), "--target-count", "4"});
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_EQ(data::DatasetDigest(data::LoadIndex(dir.path())), before);
  EXPECT_FALSE(fs::exists(dir / ".quarantine"));
}

TEST(Cli, SplitIsByteStableAcrossRuns)
{
  testing::TempDir dir;
  TexturedCorpus(dir.path(), 3, 10, 4);
  ASSERT_EQ(Cli({"split", dir.path().string(), "--seed", "7", "--out", (dir / ".a").string()}).rc, 0);
  ASSERT_EQ(Cli({"split", dir.path().string(), "--seed", "7", "--out", (dir / ".b").string()}).rc, 0);
  EXPECT_EQ(Slurp(dir / ".a/split.json"), Slurp(dir / ".b/split.json"));
  const auto split = JsonFile(dir / ".a/split.json");
  EXPECT_EQ(split["train"].size(), 18u);
  EXPECT_EQ(split["test"].size(), 12u);
  ASSERT_EQ(Cli({"split", dir.path().string(), "--seed", "8", "--out", (dir / ".c").string()}).rc, 0);
  EXPECT_NE(Slurp(dir / ".a/split.json"), Slurp(dir / ".c/split.json"));
}

// One 50-epoch scratch run on a 5-class toy corpus, shared by the checks
// below.
class ScratchRun : public ::testing::Test
{
protected:
  static void SetUpTestSuite()
  {
    dir_ = new testing::TempDir("herbclf-cli");
    TexturedCorpus(root(), 5, 8, 5);
    const auto split = Cli({"split", root().string()});
    ASSERT_EQ(split.rc, 0) << split.output;
    train_ = new RunResult(Cli({"train", root().string(), "--split", split_file().string(), "--out", run().string(),
                                "--arch", "scratch", "--epochs", "50", "--dataset-name", "toy", "--seed", "3"}));
  }
  static void TearDownTestSuite()
  {
    delete train_;
    delete dir_;
  }
  static fs::path root() { return dir_->path() / "corpus"; }
  static fs::path split_file() { return root() / ".herbclf/split/split.json"; }
  static fs::path run() { return dir_->path() / "run"; }
  static fs::path best_checkpoint() { return JsonFile(run() / "run.json")["details"]["best_checkpoint"].get<std::string>(); }

  static testing::TempDir *dir_;
  static RunResult *train_;
};
testing::TempDir *ScratchRun::dir_ = nullptr;
RunResult *ScratchRun::train_ = nullptr;

TEST_F(ScratchRun, WritesFiftyEpochRowsAndArtifacts)
{
  ASSERT_EQ(train_->rc, 0) << train_->output;
  const auto history = eval::ReadMetricsCsv(run() / eval::kMetricsCsv);
  ASSERT_EQ(history.size(), 50u);
  EXPECT_EQ(history.back().epoch, 49);
  for (const char *f : {eval::kLossCurve, eval::kAccuracyCurve, eval::kReportJson, eval::kConfusionCsv, "config.json",
                        "run.json"})
  {
    EXPECT_TRUE(fs::is_regular_file(run() / f)) << f;
  }
  EXPECT_NE(Slurp(run() / eval::kLossCurve).find("data-x-max=\"49\""), std::string::npos);
}

TEST_F(ScratchRun, ConfigEchoAndManifestSufficeToRerun)
{
  ASSERT_EQ(train_->rc, 0) << train_->output;
  const auto config = JsonFile(run() / "config.json");
  EXPECT_EQ(config["train"]["epochs"], 50);
  EXPECT_EQ(config["train"]["seed"], 3);
  EXPECT_DOUBLE_EQ(config["train"]["base_lr"].get<double>(), 0.001);
  EXPECT_EQ(config["model"]["architecture"], "scratch");
  EXPECT_EQ(config["dataset"]["classes"].size(), 5u);
  EXPECT_EQ(config["dataset"]["split_hash"], GitBlobHash(ReadFileBytes(split_file())));
  const auto manifest = JsonFile(run() / "run.json");
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["details"]["input_resolution"], 128);
  EXPECT_EQ(manifest["dataset_digest"], data::DatasetDigest(data::LoadIndex(root())));
  EXPECT_TRUE(fs::is_regular_file(best_checkpoint()));
}

TEST_F(ScratchRun, EvaluateIsRepeatableAndTrainBeatsTest)
{
  ASSERT_EQ(train_->rc, 0) << train_->output;
  const auto ckpt = best_checkpoint().string();
  const auto out = dir_->path() / "eval";
  ASSERT_EQ(Cli({"evaluate", ckpt, root().string(), "--split", split_file().string(), "--out", (out / "a").string()}).rc, 0);
  ASSERT_EQ(Cli({"evaluate", ckpt, root().string(), "--split", split_file().string(), "--out", (out / "b").string()}).rc, 0);
  EXPECT_EQ(Slurp(out / "a" / eval::kReportJson), Slurp(out / "b" / eval::kReportJson));
  EXPECT_EQ(Slurp(out / "a" / eval::kConfusionCsv), Slurp(out / "b" / eval::kConfusionCsv));

  const auto r = Cli({"evaluate", ckpt, root().string(), "--split", split_file().string(), "--out",
                      (out / "train").string(), "--partition", "train"});
  ASSERT_EQ(r.rc, 0) << r.output;
  const auto test_report = eval::ReadReportJson(out / "a" / eval::kReportJson);
  const auto train_report = eval::ReadReportJson(out / "train" / eval::kReportJson);
  EXPECT_EQ(test_report.num_samples, 15);
  EXPECT_EQ(train_report.num_samples, 25);
  EXPECT_GE(train_report.accuracy, test_report.accuracy);

  EXPECT_EQ(Cli({"evaluate", ckpt, root().string(), "--split", split_file().string(), "--out", (out / "x").string(),
                 "--partition", "validation"})
                .rc,
            1);
}

TEST_F(ScratchRun, RerunReproducesMetricsExactly)
{
  ASSERT_EQ(train_->rc, 0) << train_->output;
  const auto again = dir_->path() / "again";
  const auto r = Cli({"train", root().string(), "--split", split_file().string(), "--out", again.string(), "--arch",
                      "scratch", "--epochs", "50", "--dataset-name", "toy", "--seed", "3"});
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_EQ(Slurp(again / eval::kMetricsCsv), Slurp(run() / eval::kMetricsCsv));
  EXPECT_EQ(Slurp(again / eval::kReportJson), Slurp(run() / eval::kReportJson));
}

class BackboneRuns : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto weights = testing::TestWeightsDir();
    if (!weights) GTEST_SKIP() << "no exported backbone artifacts in this build";
    weights_ = *weights;
    TexturedCorpus(dir_ / "corpus", 2, 5, 6);
    ASSERT_EQ(Cli({"split", (dir_ / "corpus").string()}).rc, 0);
  }
  RunResult Train(const std::string &arch)
  {
    const auto root = dir_ / "corpus";
    return Cli({"train", root.string(), "--split", (root / ".herbclf/split/split.json").string(), "--out",
                (dir_ / arch).string(), "--arch", arch, "--epochs", "1", "--batch-size", "4", "--weights-dir",
                weights_.string()});
  }
  testing::TempDir dir_;
  fs::path weights_;
};

TEST_F(BackboneRuns, SwinRecordsNativeResolution)
{
  const auto r = Train("swin_t");
  ASSERT_EQ(r.rc, 0) << r.output;
  EXPECT_NE(r.output.find("not the published ones"), std::string::npos);
  const auto manifest = JsonFile(dir_ / "swin_t/run.json");
  EXPECT_EQ(manifest["details"]["input_resolution"], 224);
  EXPECT_EQ(manifest["details"]["weights_source"], "random-init");
  EXPECT_EQ(JsonFile(dir_ / "swin_t/config.json")["preprocess"]["target_resolution"], 224);
}

TEST_F(BackboneRuns, ConvnextCheckpointHasCorpusSizedHead)
{
  const auto r = Train("convnext_base");
  ASSERT_EQ(r.rc, 0) << r.output;
  const fs::path ckpt = JsonFile(dir_ / "convnext_base/run.json")["details"]["last_checkpoint"].get<std::string>();
  const auto info = train::ReadCheckpointInfo(ckpt);
  EXPECT_EQ(info.spec.num_classes, 2);
  EXPECT_EQ(info.class_names, (std::vector<std::string>{"species_0", "species_1"}));
  bool found = false;
  for (const auto &t : train::ReadCheckpointState<float>(ckpt))
  {
    if (t.name == "classifier.2.weight")
    {
      found = true;
      EXPECT_EQ(t.shape, (nn::Shape{2, 1024}));
    }
  }
  EXPECT_TRUE(found);

  const auto root = dir_ / "corpus";
  const auto eval = Cli({"evaluate", ckpt.string(), root.string(), "--split", (root / ".herbclf/split/split.json").string(),
                         "--out", (dir_ / "eval").string(), "--weights-dir", weights_.string()});
  ASSERT_EQ(eval.rc, 0) << eval.output;
  EXPECT_EQ(eval::ReadReportJson(dir_ / "eval" / eval::kReportJson).num_samples, 4);
}

}  // namespace
}  // namespace herbclf
