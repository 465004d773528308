// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/data/duplicates.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "herbclf/error.hpp"
#include "herbclf/hash.hpp"
#include "herbclf/parallel.hpp"

namespace herbclf::data
{

namespace
{

class DisjointSets
{
public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t Find(std::size_t x)
  {
    while (parent_[x] != x)
    {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void Unite(std::size_t a, std::size_t b)
  {
    a = Find(a);
    b = Find(b);
    if (a != b)
    {
      // Keep the smaller index as root so component order is stable.
      parent_[std::max(a, b)] = std::min(a, b);
    }
  }

private:
  std::vector<std::size_t> parent_;
};

struct Fingerprint
{
  std::uint64_t phash = 0;
  std::uint64_t content = 0;  // FNV-1a of the file bytes
  std::size_t size = 0;
  bool decodable = false;
};

}  // namespace

std::uint64_t PerceptualHash(const Rgb8Image &image)
{
  if (image.height <= 0 || image.width <= 0)
  {
    throw DataError("cannot hash a zero-area image");
  }
  cv::Mat luma(image.height, image.width, CV_32F);
  for (int y = 0; y < image.height; ++y)
  {
    auto *row = luma.ptr<float>(y);
    const std::uint8_t *src = image.pixels.data() + static_cast<std::size_t>(y) * image.width * 3;
    for (int x = 0; x < image.width; ++x)
    {
      row[x] = 0.299f * src[3 * x] + 0.587f * src[3 * x + 1] + 0.114f * src[3 * x + 2];
    }
  }
  cv::Mat blurred;
  cv::blur(luma, blurred, cv::Size(7, 7));
  cv::Mat small;
  cv::resize(blurred, small, cv::Size(32, 32), 0, 0, cv::INTER_AREA);
  cv::Mat spectrum;
  cv::dct(small, spectrum);

  std::array<float, 64> block{};
  for (int r = 0; r < 8; ++r)
  {
    for (int c = 0; c < 8; ++c)
    {
      block[r * 8 + c] = spectrum.at<float>(r + 1, c + 1);
    }
  }
  std::array<float, 64> sorted = block;
  std::nth_element(sorted.begin(), sorted.begin() + 32, sorted.end());
  const float upper = sorted[32];
  const float lower = *std::max_element(sorted.begin(), sorted.begin() + 32);
  const float median = 0.5f * (lower + upper);

  std::uint64_t hash = 0;
  for (int i = 0; i < 64; ++i)
  {
    if (block[i] > median)
    {
      hash |= std::uint64_t{1} << i;
    }
  }
  return hash;
}

int HammingDistance(std::uint64_t a, std::uint64_t b) noexcept { return std::popcount(a ^ b); }

DuplicateReport FindNearDuplicates(const DatasetIndex &index, int hamming_threshold)
{
  if (hamming_threshold < 0)
  {
    throw UsageError("hamming threshold must be >= 0, got " + std::to_string(hamming_threshold));
  }
  const auto samples = index.all();
  const std::size_t n = samples.size();
  std::vector<Fingerprint> prints(n);

  ParallelFor(static_cast<std::ptrdiff_t>(n), [&](std::ptrdiff_t i) {
    const auto bytes = ReadFileBytes(samples[i]->source_path);
    prints[i].content = Fnv1a64(bytes);
    prints[i].size = bytes.size();
    if (auto image = TryDecodeRgb8(samples[i]->source_path); image && !image->pixels.empty())
    {
      prints[i].phash = PerceptualHash(*image);
      prints[i].decodable = true;
    }
  });

  DuplicateReport report;
  report.hamming_threshold = hamming_threshold;
  std::vector<std::size_t> hashed;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (prints[i].decodable)
    {
      hashed.push_back(i);
    }
    else
    {
      report.undecodable.push_back(samples[i]->sample_id);
    }
  }

  DisjointSets sets(n);
  // Byte-identical files, confirmed by comparing contents.
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::size_t>> by_content;
  for (std::size_t i : hashed)
  {
    by_content[{prints[i].size, prints[i].content}].push_back(i);
  }
  for (const auto &[key, members] : by_content)
  {
    if (members.size() < 2)
    {
      continue;
    }
    const auto first = ReadFileBytes(samples[members[0]]->source_path);
    for (std::size_t k = 1; k < members.size(); ++k)
    {
      if (ReadFileBytes(samples[members[k]]->source_path) == first)
      {
        sets.Unite(members[0], members[k]);
      }
    }
  }
  for (std::size_t a = 0; a < hashed.size(); ++a)
  {
    for (std::size_t b = a + 1; b < hashed.size(); ++b)
    {
      if (HammingDistance(prints[hashed[a]].phash, prints[hashed[b]].phash) <= hamming_threshold)
      {
        sets.Unite(hashed[a], hashed[b]);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i : hashed)
  {
    components[sets.Find(i)].push_back(i);
  }
  for (const auto &[root, members] : components)
  {
    if (members.size() < 2)
    {
      continue;
    }
    DuplicateGroup group;
    group.byte_identical = true;
    for (std::size_t k = 0; k < members.size(); ++k)
    {
      group.sample_ids.push_back(samples[members[k]]->sample_id);
      for (std::size_t j = k + 1; j < members.size(); ++j)
      {
        group.max_distance =
            std::max(group.max_distance, HammingDistance(prints[members[k]].phash, prints[members[j]].phash));
      }
      if (prints[members[k]].size != prints[members[0]].size ||
          prints[members[k]].content != prints[members[0]].content)
      {
        group.byte_identical = false;
      }
    }
    std::sort(group.sample_ids.begin(), group.sample_ids.end());
    report.groups.push_back(std::move(group));
  }
  std::sort(report.groups.begin(), report.groups.end(),
            [](const DuplicateGroup &a, const DuplicateGroup &b) { return a.sample_ids.front() < b.sample_ids.front(); });
  return report;
}

nlohmann::json ToJson(const DuplicateReport &report)
{
  nlohmann::json groups = nlohmann::json::array();
  for (const auto &g : report.groups)
  {
    groups.push_back({{"sample_ids", g.sample_ids}, {"byte_identical", g.byte_identical}, {"max_distance", g.max_distance}});
  }
  return {{"hamming_threshold", report.hamming_threshold}, {"groups", groups}, {"undecodable", report.undecodable}};
}

}  // namespace herbclf::data
