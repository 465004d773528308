// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/augment/balance.hpp"

#include <fstream>
#include <set>

#include "herbclf/error.hpp"
#include "herbclf/parallel.hpp"
#include "herbclf/rng.hpp"

namespace herbclf::augment
{

namespace fs = std::filesystem;

namespace
{

constexpr std::string_view kAugMarker = "__aug_";

std::optional<AugmentationOp> OpFromAugmentedName(const fs::path &path)
{
  const std::string stem = path.stem().string();
  const auto pos = stem.rfind(kAugMarker);
  if (pos == std::string::npos)
  {
    return std::nullopt;
  }
  return ParseOp(std::string_view(stem).substr(pos + kAugMarker.size()));
}

}  // namespace

std::vector<BalancePlan> PlanBalance(const data::DatasetIndex &index, std::size_t target_count, std::uint64_t seed)
{
  if (target_count == 0)
  {
    throw UsageError("target count must be positive");
  }
  std::vector<BalancePlan> plans;
  for (const auto &name : index.classes())
  {
    BalancePlan plan;
    plan.class_name = name;
    plan.target_count = target_count;

    std::vector<std::string> parents;
    std::set<std::pair<std::string, AugmentationOp>> taken;
    for (const auto &s : index.samples(name))
    {
      if (s.provenance == data::Provenance::original)
      {
        parents.push_back(s.sample_id);
        continue;
      }
      ++plan.existing_augmented;
      if (auto op = OpFromAugmentedName(s.source_path))
      {
        taken.emplace(*s.parent_id, *op);
      }
    }
    plan.originals = parents.size();

    const std::size_t current = plan.originals + plan.existing_augmented;
    if (current >= target_count)
    {
      plans.push_back(std::move(plan));
      continue;
    }
    const std::size_t deficit = target_count - current;
    const std::size_t pool = kOpOrder.size() * parents.size();
    const std::size_t free_pairs = pool > taken.size() ? pool - taken.size() : 0;
    if (deficit > free_pairs)
    {
      throw DataError("class " + name + " cannot reach " + std::to_string(target_count) + " samples: " +
                      std::to_string(plan.originals) + " originals allow at most " +
                      std::to_string(current + free_pairs));
    }

    Rng rng(DeriveSeed(seed, name));
    rng.Shuffle(parents.begin(), parents.end());
    for (AugmentationOp op : kOpOrder)
    {
      for (const auto &parent : parents)
      {
        if (plan.assignments.size() == deficit)
        {
          break;
        }
        if (!taken.contains({parent, op}))
        {
          plan.assignments.push_back({parent, op});
        }
      }
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

fs::path AugmentedPath(const fs::path &parent_path, AugmentationOp op)
{
  fs::path out = parent_path;
  out.replace_filename(parent_path.stem().string() + std::string(kAugMarker) + std::string(OpName(op)) +
                       parent_path.extension().string());
  return out;
}

std::vector<data::ImageSample> Materialize(const BalancePlan &plan, const data::DatasetIndex &index, int resolution)
{
  std::vector<data::ImageSample> created;
  created.reserve(plan.assignments.size());
  std::set<fs::path> targets;
  for (const auto &a : plan.assignments)
  {
    const data::ImageSample *parent = index.find(a.parent_id);
    if (!parent)
    {
      throw DataError("balance plan references unknown parent " + a.parent_id);
    }
    const fs::path target = AugmentedPath(parent->source_path, a.op);
    std::error_code ec;
    if (fs::exists(target, ec) || !targets.insert(target).second)
    {
      throw DataError("augmented file already exists: " + target.string());
    }
    data::ImageSample s;
    s.sample_id = data::MakeSampleId(parent->class_name, target.filename().string());
    s.class_name = parent->class_name;
    s.source_path = target;
    s.provenance = data::Provenance::augmented;
    s.parent_id = parent->sample_id;
    created.push_back(std::move(s));
  }

  ParallelFor(static_cast<std::ptrdiff_t>(created.size()), [&](std::ptrdiff_t i) {
    const auto &a = plan.assignments[static_cast<std::size_t>(i)];
    const data::ImageSample *parent = index.find(a.parent_id);
    const auto square = data::ResizeSquare(data::DecodeRgb8(parent->source_path), resolution);
    data::EncodeRgb8(ApplyOp(square, a.op), created[static_cast<std::size_t>(i)].source_path);
  });
  return created;
}

void WritePlanCsv(const std::vector<BalancePlan> &plans, const fs::path &path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw DataError("cannot write plan " + path.string());
  }
  out << "class,parent_id,op\n";
  for (const auto &plan : plans)
  {
    for (const auto &a : plan.assignments)
    {
      out << plan.class_name << ',' << a.parent_id << ',' << OpName(a.op) << '\n';
    }
  }
}

}  // namespace herbclf::augment
