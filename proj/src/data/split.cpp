// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/data/split.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "herbclf/error.hpp"
#include "herbclf/rng.hpp"

namespace herbclf::data
{

std::size_t TrainCountFor(std::size_t count, double fraction)
{
  // The epsilon absorbs representation error such as 0.3 * 5 = 1.4999...
  const double scaled = fraction * static_cast<double>(count);
  const auto n = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::min(n, count);
}

SplitAssignment StratifiedSplit(const DatasetIndex &index, double fraction, std::uint64_t seed)
{
  if (!(fraction > 0.0 && fraction < 1.0))
  {
    throw UsageError("train fraction must lie in (0, 1), got " + std::to_string(fraction));
  }
  SplitAssignment split;
  split.seed = seed;
  split.train_fraction = fraction;
  for (const auto &name : index.classes())
  {
    const auto &samples = index.samples(name);
    if (samples.size() < 2)
    {
      throw DataError("class " + name + " has " + std::to_string(samples.size()) +
                      " samples; a stratified split needs at least 2");
    }
    std::vector<std::string> ids;
    ids.reserve(samples.size());
    for (const auto &s : samples)
    {
      ids.push_back(s.sample_id);  // already ascending
    }
    Rng rng(DeriveSeed(seed, name));
    rng.Shuffle(ids.begin(), ids.end());
    const std::size_t n_train = TrainCountFor(ids.size(), fraction);
    split.train_ids.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    split.test_ids.insert(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  }
  return split;
}

void WriteSplitJson(const SplitAssignment &split, const std::filesystem::path &path)
{
  nlohmann::ordered_json doc;
  doc["seed"] = split.seed;
  doc["train_fraction"] = split.train_fraction;
  doc["num_train"] = split.train_ids.size();
  doc["num_test"] = split.test_ids.size();
  doc["train"] = split.train_ids;
  doc["test"] = split.test_ids;
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw DataError("cannot write split file " + path.string());
  }
  out << doc.dump(2) << '\n';
}

SplitAssignment ReadSplitJson(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open split file " + path.string());
  }
  try
  {
    const auto doc = nlohmann::json::parse(in);
    SplitAssignment split;
    split.seed = doc.at("seed").get<std::uint64_t>();
    split.train_fraction = doc.at("train_fraction").get<double>();
    split.train_ids = doc.at("train").get<std::set<std::string>>();
    split.test_ids = doc.at("test").get<std::set<std::string>>();
    for (const auto &id : split.train_ids)
    {
      if (split.test_ids.contains(id))
      {
        throw DataError("split file " + path.string() + " lists " + id + " in both partitions");
      }
    }
    return split;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError("malformed split file " + path.string() + ": " + e.what());
  }
}

void CheckSplitMatchesIndex(const SplitAssignment &split, const DatasetIndex &index)
{
  for (const auto *ids : {&split.train_ids, &split.test_ids})
  {
    for (const auto &id : *ids)
    {
      if (!index.find(id))
      {
        throw DataError("split references " + id + ", which is not in the corpus at " + index.root().string());
      }
    }
  }
  if (split.train_ids.size() + split.test_ids.size() != index.total())
  {
    throw DataError("split covers " + std::to_string(split.train_ids.size() + split.test_ids.size()) +
                    " samples but the corpus has " + std::to_string(index.total()));
  }
}

}  // namespace herbclf::data
