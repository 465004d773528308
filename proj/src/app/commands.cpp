// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "herbclf/app/manifest.hpp"
#include "herbclf/app/reference_targets.hpp"
#include "herbclf/augment/balance.hpp"
#include "herbclf/data/dataset.hpp"
#include "herbclf/data/duplicates.hpp"
#include "herbclf/data/split.hpp"
#include "herbclf/error.hpp"
#include "herbclf/eval/artifacts.hpp"
#include "herbclf/hash.hpp"
#include "herbclf/train/checkpoint.hpp"
#include "herbclf/zoo/build.hpp"

namespace herbclf::app
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

std::string Fmt(const char *format, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

void WriteJsonFile(const fs::path &path, const ordered_json &doc)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out)
  {
    throw DataError("cannot write " + path.string());
  }
}

std::string FileHash(const fs::path &path) { return GitBlobHash(ReadFileBytes(path)); }

void RequireDirectory(const fs::path &root)
{
  if (!fs::is_directory(root))
  {
    throw DataError("corpus root " + root.string() + " is not a directory");
  }
}

std::string DatasetName(const fs::path &root)
{
  auto name = fs::weakly_canonical(root).filename().string();
  return name.empty() ? "dataset" : name;
}

void MoveToQuarantine(const fs::path &root, const data::ImageSample &sample, std::vector<fs::path> &moved)
{
  const auto dest_dir = root / ".quarantine" / sample.class_name;
  eval::EnsureDirectory(dest_dir);
  const auto dest = dest_dir / sample.source_path.filename();
  if (fs::exists(dest))
  {
    throw DataError("quarantine target " + dest.string() + " already exists");
  }
  fs::rename(sample.source_path, dest);
  moved.push_back(dest);
}

struct LoadedSplit
{
  data::DatasetIndex index;
  data::SplitAssignment split;
};

LoadedSplit LoadCorpusAndSplit(const fs::path &root, const fs::path &split_file)
{
  RequireDirectory(root);
  LoadedSplit out{data::LoadIndex(root), data::ReadSplitJson(split_file)};
  data::CheckSplitMatchesIndex(out.split, out.index);
  return out;
}

}  // namespace

fs::path DefaultOutputDir(const fs::path &root, const std::string &command) { return root / ".herbclf" / command; }

// prepare --------------------------------------------------------------------

PrepareResult CmdPrepare(const PrepareOptions &options, std::ostream &log)
{
  if (options.target_count < 1)
  {
    throw UsageError("--target-count must be positive");
  }
  if (options.dedup_threshold < 0 || options.dedup_threshold > 64)
  {
    throw UsageError("--dedup-threshold must lie in [0, 64]");
  }
  RequireDirectory(options.root);
  RunManifest manifest;
  manifest.command = "prepare";
  manifest.args = options.argv;
  manifest.seed = options.seed;
  manifest.started_at = UtcTimestamp();

  PrepareResult result;
  result.out_dir = options.out_dir.empty() ? DefaultOutputDir(options.root, "prepare") : options.out_dir;

  data::LoadReport load_report;
  auto index = data::LoadIndex(options.root, &load_report);
  result.before = index.counts();
  for (const auto &warning : load_report.warnings)
  {
    log << "warning: " << warning << '\n';
  }

  const auto duplicates = data::FindNearDuplicates(index, options.dedup_threshold);
  result.duplicate_groups = duplicates.groups.size();
  log << "near-duplicate groups (threshold " << options.dedup_threshold << "): " << duplicates.groups.size() << '\n';
  if (options.remove_duplicates && !duplicates.groups.empty())
  {
    std::set<std::string> doomed;
    for (const auto &group : duplicates.groups)
    {
      bool kept = false;
      for (const auto &id : group.sample_ids)
      {
        const auto *s = index.find(id);
        if (s->provenance != data::Provenance::original)
        {
          continue;
        }
        if (!kept)
        {
          kept = true;
        }
        else
        {
          doomed.insert(id);
        }
      }
    }
    for (const auto *s : index.all())
    {
      const bool orphaned = s->parent_id && doomed.contains(*s->parent_id);
      if (doomed.contains(s->sample_id) || orphaned)
      {
        MoveToQuarantine(options.root, *s, result.quarantined);
      }
    }
    log << "quarantined " << result.quarantined.size() << " file(s) under " << (options.root / ".quarantine").string()
        << '\n';
    index = data::LoadIndex(options.root);
  }

  const auto plans = augment::PlanBalance(index, options.target_count, options.seed);
  for (const auto &plan : plans)
  {
    result.augmented += augment::Materialize(plan, index, options.resolution).size();
  }
  index = data::LoadIndex(options.root);
  result.after = index.counts();

  log << "class,before,after\n";
  for (const auto &[name, after] : result.after)
  {
    const auto it = result.before.find(name);
    log << name << ',' << (it == result.before.end() ? 0 : it->second) << ',' << after << '\n';
  }
  log << "augmented samples written: " << result.augmented << ", total samples: " << index.total() << '\n';

  eval::EnsureDirectory(result.out_dir);
  data::WriteManifestCsv(index, result.out_dir / "manifest.csv");
  WriteJsonFile(result.out_dir / "duplicates.json", ordered_json(data::ToJson(duplicates)));
  augment::WritePlanCsv(plans, result.out_dir / "balance_plan.csv");

  manifest.dataset_digest = data::DatasetDigest(index);
  manifest.output_dir = result.out_dir;
  ordered_json inputs{{"command", "prepare"},
                      {"target_count", options.target_count},
                      {"seed", options.seed},
                      {"dedup_threshold", options.dedup_threshold},
                      {"remove_duplicates", options.remove_duplicates},
                      {"resolution", options.resolution},
                      {"dataset_digest", manifest.dataset_digest}};
  manifest.input_hash = InputHash(inputs);
  manifest.details = inputs;
  manifest.details["root"] = options.root.string();
  manifest.details["augmented"] = result.augmented;
  manifest.details["quarantined"] = result.quarantined.size();
  manifest.finished_at = UtcTimestamp();
  WriteRunManifest(manifest);
  return result;
}

// split ----------------------------------------------------------------------

fs::path CmdSplit(const SplitOptions &options, std::ostream &log)
{
  RequireDirectory(options.root);
  RunManifest manifest;
  manifest.command = "split";
  manifest.args = options.argv;
  manifest.seed = options.seed;
  manifest.started_at = UtcTimestamp();

  const auto index = data::LoadIndex(options.root);
  const auto split = data::StratifiedSplit(index, options.fraction, options.seed);
  const auto out_dir = options.out_dir.empty() ? DefaultOutputDir(options.root, "split") : options.out_dir;
  eval::EnsureDirectory(out_dir);
  const auto path = out_dir / "split.json";
  data::WriteSplitJson(split, path);
  log << "split " << index.total() << " samples: " << split.train_ids.size() << " train / " << split.test_ids.size()
      << " test -> " << path.string() << '\n';

  manifest.dataset_digest = data::DatasetDigest(index);
  manifest.output_dir = out_dir;
  manifest.input_hash = InputHash({{"command", "split"},
                                   {"fraction", options.fraction},
                                   {"seed", options.seed},
                                   {"dataset_digest", manifest.dataset_digest}});
  manifest.details = {{"root", options.root.string()},
                      {"fraction", options.fraction},
                      {"num_train", split.train_ids.size()},
                      {"num_test", split.test_ids.size()},
                      {"split_file", path.string()}};
  manifest.finished_at = UtcTimestamp();
  WriteRunManifest(manifest);
  return path;
}

// train ----------------------------------------------------------------------

TrainOutcome CmdTrain(const TrainOptions &options, std::ostream &log)
{
  if (options.out_dir.empty())
  {
    throw UsageError("train needs --out");
  }
  RunManifest manifest;
  manifest.command = "train";
  manifest.args = options.argv;
  manifest.config_path = options.config_file;
  manifest.started_at = UtcTimestamp();

  train::TrainConfig config;
  std::optional<std::string> arch_name = std::nullopt;
  std::optional<int> num_classes, input_resolution;
  std::optional<bool> pretrained;
  std::string normalization = std::string(data::ToString(data::Normalization::unit_range));
  std::string dataset_name = DatasetName(options.root);

  if (!options.config_file.empty())
  {
    std::ifstream in(options.config_file, std::ios::binary);
    if (!in)
    {
      throw UsageError("cannot open config file " + options.config_file.string());
    }
    nlohmann::json doc;
    try
    {
      doc = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::parse_error &e)
    {
      throw UsageError(options.config_file.string() + ": " + e.what());
    }
    if (!doc.is_object())
    {
      throw UsageError(options.config_file.string() + " must hold a JSON object");
    }
    try
    {
      if (doc.contains("architecture")) arch_name = doc["architecture"].get<std::string>();
      if (doc.contains("num_classes")) num_classes = doc["num_classes"].get<int>();
      if (doc.contains("pretrained")) pretrained = doc["pretrained"].get<bool>();
      if (doc.contains("input_resolution")) input_resolution = doc["input_resolution"].get<int>();
      if (doc.contains("normalization")) normalization = doc["normalization"].get<std::string>();
      if (doc.contains("dataset_name")) dataset_name = doc["dataset_name"].get<std::string>();
    }
    catch (const nlohmann::json::exception &e)
    {
      throw UsageError(options.config_file.string() + ": " + e.what());
    }
    for (const char *key :
         {"architecture", "num_classes", "pretrained", "input_resolution", "normalization", "dataset_name"})
    {
      doc.erase(key);
    }
    config = train::MergeJson(config, doc);
  }
  if (options.architecture) arch_name = options.architecture;
  if (options.epochs) config.epochs = *options.epochs;
  if (options.lr) config.base_lr = *options.lr;
  if (options.gamma) config.gamma = *options.gamma;
  if (options.batch_size) config.batch_size = *options.batch_size;
  if (options.seed) config.seed = *options.seed;
  if (options.normalization) normalization = *options.normalization;
  if (options.dataset_name) dataset_name = *options.dataset_name;
  if (!arch_name)
  {
    throw UsageError("train needs --arch (or \"architecture\" in the config file)");
  }
  config.Validate();

  const auto arch = zoo::ParseArchitecture(*arch_name);
  data::PreprocessConfig preprocess;
  preprocess.normalization = data::ParseNormalization(normalization);

  auto [index, split] = LoadCorpusAndSplit(options.root, options.split_file);
  auto spec = zoo::ModelSpec::For(arch, static_cast<int>(index.num_classes()));
  if (num_classes && *num_classes != spec.num_classes)
  {
    throw DataError("config asks for " + std::to_string(*num_classes) + " classes but the corpus has " +
                    std::to_string(spec.num_classes));
  }
  if (pretrained) spec.pretrained = *pretrained;
  if (input_resolution) spec.input_resolution = *input_resolution;
  spec.Validate();
  preprocess.target_resolution = spec.input_resolution;
  preprocess.Validate();

  zoo::BuildOptions build;
  if (!options.weights_dir.empty()) build.weights_dir = options.weights_dir;
  std::string artifact_source = "none";
  if (spec.pretrained)
  {
    const auto artifact = zoo::ArtifactPath(arch, build.weights_dir);
    if (!fs::is_regular_file(artifact))
    {
      throw ArtifactUnavailable(zoo::FetchInstructions(arch, build.weights_dir));
    }
    artifact_source = zoo::ReadArtifactInfo(artifact).source;
    if (artifact_source != "published")
    {
      log << "warning: " << artifact.string() << " holds " << artifact_source
          << " weights, not the published ones; results will not reflect transfer learning\n";
    }
  }

  log << "loading " << split.train_ids.size() << " train / " << split.test_ids.size() << " test images at "
      << spec.input_resolution << "^2\n";
  const auto train_set = data::LoadLabeled(index, split.train_ids, spec.input_resolution);
  const auto test_set = data::LoadLabeled(index, split.test_ids, spec.input_resolution);
  auto model = zoo::BuildModel<float>(spec, config.seed, build);
  log << zoo::ToString(arch) << ": " << zoo::ParameterCount(*model) << " trainable parameters\n";

  eval::EnsureDirectory(options.out_dir);
  const auto ckpt_dir = options.out_dir / "checkpoints";
  eval::EnsureDirectory(ckpt_dir);

  manifest.dataset_digest = data::DatasetDigest(index);
  manifest.seed = config.seed;
  manifest.output_dir = options.out_dir;
  ordered_json echo;
  echo["train"] = train::ToJson(config);
  echo["model"] = zoo::ToJson(spec);
  echo["preprocess"] = {{"target_resolution", preprocess.target_resolution},
                        {"normalization", data::ToString(preprocess.normalization)},
                        {"standardize_mean", preprocess.standardize_mean},
                        {"standardize_std", preprocess.standardize_std}};
  echo["dataset"] = {{"root", options.root.string()},
                     {"name", dataset_name},
                     {"digest", manifest.dataset_digest},
                     {"classes", index.classes()},
                     {"split_file", options.split_file.string()},
                     {"split_hash", FileHash(options.split_file)}};
  echo["weights"] = {{"dir", build.weights_dir.string()}, {"source", artifact_source}};
  WriteJsonFile(options.out_dir / "config.json", echo);
  ordered_json inputs = echo;
  inputs["dataset"].erase("root");
  inputs["weights"].erase("dir");
  manifest.input_hash = InputHash(inputs);

  train::TrainOptions topts;
  topts.checkpoint_dir = ckpt_dir;
  topts.dataset_name = dataset_name;
  topts.class_names = index.classes();
  topts.on_epoch = [&](const train::EpochMetrics &m) {
    log << "epoch " << m.epoch << " lr " << Fmt("%.6g", m.lr) << " train_loss " << Fmt("%.4f", m.train_loss)
        << " train_acc " << Fmt("%.4f", m.train_accuracy) << " test_loss " << Fmt("%.4f", m.test_loss) << " test_acc "
        << Fmt("%.4f", m.test_accuracy) << '\n';
  };

  TrainOutcome outcome;
  outcome.spec = spec;
  outcome.config = config;
  outcome.out_dir = options.out_dir;
  outcome.result = train::Train(*model, train_set, test_set, config, preprocess, topts);
  const auto evaluation = eval::EvaluateModel(*model, test_set, preprocess, index.classes(),
                                              static_cast<std::size_t>(config.batch_size));
  outcome.report = evaluation.report;
  eval::EmitArtifacts(outcome.result.history, evaluation, index.classes(), options.out_dir);
  log << "final test accuracy " << Fmt("%.4f", evaluation.report.accuracy) << ", macro F1 "
      << Fmt("%.4f", evaluation.report.macro_f1) << '\n';

  manifest.details = {{"architecture", zoo::ToString(arch)},
                      {"input_resolution", spec.input_resolution},
                      {"weights_source", artifact_source},
                      {"best_epoch", outcome.result.best_epoch},
                      {"best_checkpoint", outcome.result.best_checkpoint.string()},
                      {"last_checkpoint", outcome.result.last_checkpoint.string()}};
  manifest.finished_at = UtcTimestamp();
  WriteRunManifest(manifest);
  return outcome;
}

// evaluate -------------------------------------------------------------------

eval::Evaluation CmdEvaluate(const EvaluateOptions &options, std::ostream &log)
{
  if (options.partition != "test" && options.partition != "train")
  {
    throw UsageError("--partition must be test or train, got " + options.partition);
  }
  if (options.out_dir.empty())
  {
    throw UsageError("evaluate needs --out");
  }
  RunManifest manifest;
  manifest.command = "evaluate";
  manifest.args = options.argv;
  manifest.started_at = UtcTimestamp();

  const auto info = train::ReadCheckpointInfo(options.checkpoint);
  auto [index, split] = LoadCorpusAndSplit(options.root, options.split_file);
  if (info.spec.num_classes != static_cast<int>(index.num_classes()) || info.class_names != index.classes())
  {
    throw DataError("checkpoint was trained on " + std::to_string(info.spec.num_classes) +
                    " classes that do not match the corpus's " + std::to_string(index.num_classes()));
  }
  zoo::BuildOptions build;
  if (!options.weights_dir.empty()) build.weights_dir = options.weights_dir;
  auto model = zoo::BuildModel<float>(info.spec, info.seed, build);
  model->LoadState(train::ReadCheckpointState<float>(options.checkpoint));

  data::PreprocessConfig preprocess;
  preprocess.target_resolution = info.spec.input_resolution;
  preprocess.normalization = info.normalization;
  const auto &ids = options.partition == "train" ? split.train_ids : split.test_ids;
  const auto images = data::LoadLabeled(index, ids, info.spec.input_resolution);
  const auto evaluation = eval::EvaluateModel(*model, images, preprocess, index.classes());

  eval::EnsureDirectory(options.out_dir);
  eval::WriteReportJson(options.out_dir / eval::kReportJson, evaluation.report);
  eval::WriteConfusionCsv(options.out_dir / eval::kConfusionCsv, evaluation.confusion, index.classes());
  log << options.partition << " partition: " << evaluation.report.num_samples << " samples, accuracy "
      << Fmt("%.4f", evaluation.report.accuracy) << ", macro P/R/F1 " << Fmt("%.4f", evaluation.report.macro_precision)
      << " / " << Fmt("%.4f", evaluation.report.macro_recall) << " / " << Fmt("%.4f", evaluation.report.macro_f1)
      << '\n';

  manifest.dataset_digest = data::DatasetDigest(index);
  manifest.seed = info.seed;
  manifest.output_dir = options.out_dir;
  manifest.input_hash = InputHash({{"command", "evaluate"},
                                   {"checkpoint", FileHash(options.checkpoint)},
                                   {"split_hash", FileHash(options.split_file)},
                                   {"partition", options.partition},
                                   {"dataset_digest", manifest.dataset_digest}});
  manifest.details = {{"checkpoint", options.checkpoint.string()},
                      {"partition", options.partition},
                      {"architecture", zoo::ToString(info.spec.architecture)},
                      {"epoch", info.epoch},
                      {"loss", evaluation.loss}};
  manifest.finished_at = UtcTimestamp();
  WriteRunManifest(manifest);
  return evaluation;
}

// reproduce ------------------------------------------------------------------

std::vector<ReproduceRow> CmdReproduce(const ReproduceOptions &options, std::ostream &log)
{
  const auto targets = TargetTable(options.table);
  if (!options.long_run_acknowledged)
  {
    throw UsageError("reproducing a results table trains six networks for " + std::to_string(options.epochs) +
                     " epochs each; pass --yes-long-run to confirm");
  }
  if (options.out_dir.empty())
  {
    throw UsageError("reproduce needs --out");
  }
  RequireDirectory(options.root);
  std::vector<TargetRow> rows;
  for (const auto &row : targets)
  {
    const bool wanted =
        options.architectures.empty() ||
        std::find(options.architectures.begin(), options.architectures.end(), zoo::ToString(row.architecture)) !=
            options.architectures.end();
    if (wanted) rows.push_back(row);
  }
  for (const auto &name : options.architectures)
  {
    zoo::ParseArchitecture(name);
  }
  const auto weights_dir = options.weights_dir.empty() ? zoo::DefaultWeightsDir() : options.weights_dir;
  for (const auto &row : rows)
  {
    if (row.architecture != zoo::Architecture::scratch &&
        !fs::is_regular_file(zoo::ArtifactPath(row.architecture, weights_dir)))
    {
      throw ArtifactUnavailable(zoo::FetchInstructions(row.architecture, weights_dir));
    }
  }

  RunManifest manifest;
  manifest.command = "reproduce";
  manifest.args = options.argv;
  manifest.seed = options.seed;
  manifest.started_at = UtcTimestamp();
  eval::EnsureDirectory(options.out_dir);

  const auto index = data::LoadIndex(options.root);
  if (static_cast<int>(index.num_classes()) != TargetClassCount(options.table))
  {
    log << "warning: corpus has " << index.num_classes() << " classes; the reference run used "
        << TargetClassCount(options.table) << '\n';
  }
  auto split_file = options.split_file;
  if (split_file.empty())
  {
    split_file = CmdSplit({options.root, 0.6, options.seed, options.out_dir / "split", options.argv}, log);
  }

  std::vector<ReproduceRow> results;
  for (const auto &row : rows)
  {
    TrainOptions t;
    t.root = options.root;
    t.split_file = split_file;
    t.out_dir = options.out_dir / std::string(zoo::ToString(row.architecture));
    t.architecture = std::string(zoo::ToString(row.architecture));
    t.epochs = options.epochs;
    t.seed = options.seed;
    t.weights_dir = weights_dir;
    t.argv = options.argv;
    log << "== " << row.label << '\n';
    const auto outcome = CmdTrain(t, log);
    ReproduceRow r{row.architecture, outcome.result.history.back(), row.test_accuracy, 0, false};
    r.delta = r.final.test_accuracy - row.test_accuracy;
    r.within_tolerance = std::abs(r.delta) <= kReproduceTolerance;
    results.push_back(r);
  }

  log << "\nNo. | Model | Resolution | Train loss | Train acc | Test loss | Test acc | Target | Delta\n";
  ordered_json table = ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i)
  {
    const auto &r = results[i];
    const auto &row = rows[i];
    const int res = zoo::NativeResolution(r.architecture);
    log << i + 1 << ". | " << row.label << " | " << res << "^2 | " << Fmt("%.4f", r.final.train_loss) << " | "
        << Fmt("%.4f", r.final.train_accuracy) << " | " << Fmt("%.4f", r.final.test_loss) << " | "
        << Fmt("%.4f", r.final.test_accuracy) << " | " << Fmt("%.4f", r.target_test_accuracy) << " | "
        << Fmt("%+.4f", r.delta) << (r.within_tolerance ? "" : "  (outside +-0.02)") << '\n';
    table.push_back({{"architecture", zoo::ToString(r.architecture)},
                     {"resolution", res},
                     {"train_loss", r.final.train_loss},
                     {"train_accuracy", r.final.train_accuracy},
                     {"test_loss", r.final.test_loss},
                     {"test_accuracy", r.final.test_accuracy},
                     {"target_test_accuracy", r.target_test_accuracy},
                     {"delta", r.delta},
                     {"within_tolerance", r.within_tolerance}});
  }
  WriteJsonFile(options.out_dir / "results.json", {{"table", options.table}, {"rows", table}});

  manifest.dataset_digest = data::DatasetDigest(index);
  manifest.output_dir = options.out_dir;
  manifest.input_hash = InputHash({{"command", "reproduce"},
                                   {"table", options.table},
                                   {"epochs", options.epochs},
                                   {"seed", options.seed},
                                   {"split_hash", FileHash(split_file)},
                                   {"dataset_digest", manifest.dataset_digest}});
  manifest.details = {{"table", options.table}, {"split_file", split_file.string()}, {"rows", table}};
  manifest.finished_at = UtcTimestamp();
  WriteRunManifest(manifest);
  return results;
}

}  // namespace herbclf::app
