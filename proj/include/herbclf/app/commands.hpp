// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_APP_COMMANDS_HPP
#define HERBCLF_APP_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "herbclf/data/preprocess.hpp"
#include "herbclf/eval/metrics.hpp"
#include "herbclf/train/config.hpp"
#include "herbclf/train/trainer.hpp"
#include "herbclf/zoo/model_spec.hpp"

namespace herbclf::app
{

// Directory for command outputs that live inside a corpus; hidden, so
// LoadIndex never mistakes it for a class.
std::filesystem::path DefaultOutputDir(const std::filesystem::path &root, const std::string &command);

struct PrepareOptions
{
  std::filesystem::path root;
  std::size_t target_count = 100;
  std::uint64_t seed = 0;
  int dedup_threshold = 4;
  bool remove_duplicates = false;
  int resolution = 128;
  std::filesystem::path out_dir;  // default DefaultOutputDir(root, "prepare")
  std::vector<std::string> argv;
};

struct PrepareResult
{
  std::map<std::string, std::size_t> before;
  std::map<std::string, std::size_t> after;
  std::size_t augmented = 0;
  std::vector<std::filesystem::path> quarantined;
  std::size_t duplicate_groups = 0;
  std::filesystem::path out_dir;
};

// load -> find duplicates -> (quarantine) -> plan -> materialize; writes
// manifest.csv, duplicates.json, balance_plan.csv and run.json.
PrepareResult CmdPrepare(const PrepareOptions &options, std::ostream &log);

struct SplitOptions
{
  std::filesystem::path root;
  double fraction = 0.6;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;  // default DefaultOutputDir(root, "split")
  std::vector<std::string> argv;
};

// Writes split.json and run.json; returns the split file.
std::filesystem::path CmdSplit(const SplitOptions &options, std::ostream &log);

struct TrainOptions
{
  std::filesystem::path root;
  std::filesystem::path split_file;
  std::filesystem::path config_file;  // optional JSON
  std::filesystem::path out_dir;
  std::optional<std::string> architecture;
  std::optional<int> epochs;
  std::optional<double> lr;
  std::optional<double> gamma;
  std::optional<int> batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> normalization;
  std::optional<std::string> dataset_name;
  std::filesystem::path weights_dir;  // empty: DefaultWeightsDir()
  std::vector<std::string> argv;
};

struct TrainOutcome
{
  zoo::ModelSpec spec;
  train::TrainConfig config;
  train::TrainResult result;
  eval::EvaluationReport report;
  std::filesystem::path out_dir;
};

// Precedence: built-in defaults, then the config file, then flags.
TrainOutcome CmdTrain(const TrainOptions &options, std::ostream &log);

struct EvaluateOptions
{
  std::filesystem::path checkpoint;
  std::filesystem::path root;
  std::filesystem::path split_file;
  std::string partition = "test";
  std::filesystem::path out_dir;
  std::filesystem::path weights_dir;
  std::vector<std::string> argv;
};

eval::Evaluation CmdEvaluate(const EvaluateOptions &options, std::ostream &log);

struct ReproduceOptions
{
  std::filesystem::path root;
  int table = 3;
  bool long_run_acknowledged = false;
  std::vector<std::string> architectures;  // empty: all six
  int epochs = 50;
  std::uint64_t seed = 0;
  std::filesystem::path split_file;  // empty: a fresh 60/40 split
  std::filesystem::path out_dir;
  std::filesystem::path weights_dir;
  std::vector<std::string> argv;
};

struct ReproduceRow
{
  zoo::Architecture architecture;
  train::EpochMetrics final;
  double target_test_accuracy;
  double delta;
  bool within_tolerance;
};

std::vector<ReproduceRow> CmdReproduce(const ReproduceOptions &options, std::ostream &log);

}  // namespace herbclf::app

#endif  // HERBCLF_APP_COMMANDS_HPP
