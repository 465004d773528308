// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "herbclf/app/commands.hpp"
#include "herbclf/error.hpp"

namespace
{

using namespace herbclf;

template <typename T>
void OptionalFlag(CLI::App *cmd, const std::string &name, std::optional<T> &slot, const std::string &help)
{
  cmd->add_option_function<T>(name, [&slot](const T &v) { slot = v; }, help);
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App cli{"herbclf: curate, balance, split, train and evaluate plant image classifiers"};
  cli.require_subcommand(1);
  const std::vector<std::string> argv_copy(argv, argv + argc);

  app::PrepareOptions prepare;
  auto *prepare_cmd = cli.add_subcommand("prepare", "Deduplicate report and augment every class to a target count");
  prepare_cmd->add_option("root", prepare.root, "Corpus root (<root>/<class>/<images>)")->required();
  prepare_cmd->add_option("--target-count", prepare.target_count, "Images per class after balancing")
      ->capture_default_str();
  prepare_cmd->add_option("--seed", prepare.seed, "Seed for parent ordering")->capture_default_str();
  prepare_cmd->add_option("--dedup-threshold", prepare.dedup_threshold, "Max perceptual-hash Hamming distance")
      ->capture_default_str();
  prepare_cmd->add_flag("--remove-duplicates", prepare.remove_duplicates,
                        "Move all but one member of each duplicate group to <root>/.quarantine");
  prepare_cmd->add_option("--resolution", prepare.resolution, "Side length of augmented images")
      ->capture_default_str();
  prepare_cmd->add_option("--out", prepare.out_dir, "Report directory (default <root>/.herbclf/prepare)");

  app::SplitOptions split;
  auto *split_cmd = cli.add_subcommand("split", "Write a stratified, seeded train/test split");
  split_cmd->add_option("root", split.root, "Corpus root")->required();
  split_cmd->add_option("--fraction", split.fraction, "Train fraction per class")->capture_default_str();
  split_cmd->add_option("--seed", split.seed, "Shuffle seed")->capture_default_str();
  split_cmd->add_option("--out", split.out_dir, "Output directory (default <root>/.herbclf/split)");

  app::TrainOptions train;
  auto *train_cmd = cli.add_subcommand("train", "Train one architecture and emit metrics, curves and checkpoints");
  train_cmd->add_option("root", train.root, "Corpus root")->required();
  train_cmd->add_option("--split", train.split_file, "split.json from the split command")->required();
  train_cmd->add_option("--out", train.out_dir, "Run directory")->required();
  train_cmd->add_option("--config", train.config_file, "JSON file with TrainConfig/ModelSpec fields");
  OptionalFlag(train_cmd, "--arch", train.architecture,
               "scratch, resnet34, densenet121, vgg11_bn, convnext_base or swin_t");
  OptionalFlag(train_cmd, "--epochs", train.epochs, "Epochs (default 50)");
  OptionalFlag(train_cmd, "--lr", train.lr, "Base learning rate (default 0.001)");
  OptionalFlag(train_cmd, "--gamma", train.gamma, "Per-epoch learning-rate decay (default 0.9)");
  OptionalFlag(train_cmd, "--batch-size", train.batch_size, "Minibatch size (default 32)");
  OptionalFlag(train_cmd, "--seed", train.seed, "Seed for initialisation and shuffling (default 0)");
  OptionalFlag(train_cmd, "--normalization", train.normalization,
               "unit_range (default) or unit_range_then_standardize");
  OptionalFlag(train_cmd, "--dataset-name", train.dataset_name, "Name used in checkpoint file names");
  train_cmd->add_option("--weights-dir", train.weights_dir, "Backbone weight cache (default $HERBCLF_WEIGHTS_DIR)");

  app::EvaluateOptions evaluate;
  auto *eval_cmd = cli.add_subcommand("evaluate", "Evaluate a checkpoint on one partition");
  eval_cmd->add_option("checkpoint", evaluate.checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("root", evaluate.root, "Corpus root")->required();
  eval_cmd->add_option("--split", evaluate.split_file, "split.json")->required();
  eval_cmd->add_option("--out", evaluate.out_dir, "Output directory")->required();
  eval_cmd->add_option("--partition", evaluate.partition, "test or train")->capture_default_str();
  eval_cmd->add_option("--weights-dir", evaluate.weights_dir, "Backbone weight cache");

  app::ReproduceOptions reproduce;
  auto *repro_cmd = cli.add_subcommand("reproduce", "Run all six architectures and compare with reference results");
  repro_cmd->add_option("root", reproduce.root, "Corpus root")->required();
  repro_cmd->add_option("--paper-table", reproduce.table, "Reference table: 1 or 3")->required();
  repro_cmd->add_flag("--yes-long-run", reproduce.long_run_acknowledged, "Acknowledge the compute cost");
  repro_cmd->add_option("--archs", reproduce.architectures, "Subset of architectures")->delimiter(',');
  repro_cmd->add_option("--epochs", reproduce.epochs, "Epochs per architecture")->capture_default_str();
  repro_cmd->add_option("--seed", reproduce.seed, "Seed")->capture_default_str();
  repro_cmd->add_option("--split", reproduce.split_file, "Existing split.json (default: fresh 60/40 split)");
  repro_cmd->add_option("--out", reproduce.out_dir, "Output directory")->required();
  repro_cmd->add_option("--weights-dir", reproduce.weights_dir, "Backbone weight cache");

  try
  {
    cli.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = cli.exit(e);
    return rc == 0 ? herbclf::exit_code::success : herbclf::exit_code::usage;
  }

  try
  {
    if (prepare_cmd->parsed())
    {
      prepare.argv = argv_copy;
      app::CmdPrepare(prepare, std::cout);
    }
    else if (split_cmd->parsed())
    {
      split.argv = argv_copy;
      app::CmdSplit(split, std::cout);
    }
    else if (train_cmd->parsed())
    {
      train.argv = argv_copy;
      app::CmdTrain(train, std::cout);
    }
    else if (eval_cmd->parsed())
    {
      evaluate.argv = argv_copy;
      app::CmdEvaluate(evaluate, std::cout);
    }
    else if (repro_cmd->parsed())
    {
      reproduce.argv = argv_copy;
      app::CmdReproduce(reproduce, std::cout);
    }
  }
  catch (const std::exception &e)
  {
    std::cerr << "herbclf: " << e.what() << '\n';
    return herbclf::ExitCodeFor(e);
  }
  return herbclf::exit_code::success;
}
