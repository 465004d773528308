// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <unistd.h>

namespace herbclf::testing
{

namespace fs = std::filesystem;

TempDir::TempDir(const std::string &tag)
{
  std::string pattern = (fs::temp_directory_path() / (tag + "-XXXXXX")).string();
  if (!mkdtemp(pattern.data()))
  {
    throw std::runtime_error("mkdtemp failed");
  }
  path_ = pattern;
}

TempDir::~TempDir()
{
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace
{
std::uint8_t Clamp(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }
}  // namespace

data::Rgb8Image NoiseImage(Rng &rng, int height, int width)
{
  data::Rgb8Image img{height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width * 3)};
  for (auto &p : img.pixels) p = static_cast<std::uint8_t>(rng.Below(256));
  return img;
}

data::Rgb8Image SmoothImage(Rng &rng, int height, int width)
{
  data::Rgb8Image img{height, width, std::vector<std::uint8_t>(static_cast<std::size_t>(height) * width * 3)};
  double base[3], gx[3], gy[3];
  for (int c = 0; c < 3; ++c)
  {
    base[c] = rng.Uniform(40, 200);
    gx[c] = rng.Uniform(-80, 80);
    gy[c] = rng.Uniform(-80, 80);
  }
  struct Disc { double cx, cy, r, amp[3]; };
  std::vector<Disc> discs(3);
  for (auto &d : discs)
  {
    d.cx = rng.Uniform(0, 1);
    d.cy = rng.Uniform(0, 1);
    d.r = rng.Uniform(0.1, 0.3);
    for (double &a : d.amp) a = rng.Uniform(-90, 90);
  }
  for (int y = 0; y < height; ++y)
  {
    for (int x = 0; x < width; ++x)
    {
      const double u = (x + 0.5) / width, v = (y + 0.5) / height;
      for (int c = 0; c < 3; ++c)
      {
        double val = base[c] + gx[c] * (u - 0.5) + gy[c] * (v - 0.5);
        for (const auto &d : discs)
        {
          const double dist2 = (u - d.cx) * (u - d.cx) + (v - d.cy) * (v - d.cy);
          val += d.amp[c] * std::exp(-dist2 / (d.r * d.r));
        }
        img.pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c] = Clamp(val);
      }
    }
  }
  return img;
}

data::Rgb8Image ColorBlob(Rng &rng, int size, std::array<std::uint8_t, 3> color)
{
  data::Rgb8Image img{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size * 3)};
  const double cx = rng.Uniform(0.35, 0.65) * size, cy = rng.Uniform(0.35, 0.65) * size;
  const double r = rng.Uniform(0.25, 0.35) * size;
  for (int y = 0; y < size; ++y)
  {
    for (int x = 0; x < size; ++x)
    {
      const bool inside = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r;
      for (int c = 0; c < 3; ++c)
      {
        const double noise = rng.Uniform(-10, 10);
        img.pixels[(static_cast<std::size_t>(y) * size + x) * 3 + c] = Clamp((inside ? color[c] : 30.0) + noise);
      }
    }
  }
  return img;
}

data::Rgb8Image TexturedBlob(Rng &rng, int size, int class_index, int num_classes)
{
  data::Rgb8Image img{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size * 3)};
  const double hue = 6.283185307179586 * class_index / std::max(1, num_classes);
  const double base[3] = {128 + 90 * std::cos(hue), 128 + 90 * std::cos(hue + 2.094), 128 + 90 * std::cos(hue + 4.189)};
  const double freq = 2.0 + 2.0 * class_index;
  const double angle = 0.6 * class_index + rng.Uniform(-0.2, 0.2);
  const double cx = rng.Uniform(0.3, 0.7) * size, cy = rng.Uniform(0.3, 0.7) * size;
  const double r = rng.Uniform(0.25, 0.4) * size;
  for (int y = 0; y < size; ++y)
  {
    for (int x = 0; x < size; ++x)
    {
      const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      const double inside = std::exp(-d2 / (r * r));
      const double t = (x * std::cos(angle) + y * std::sin(angle)) / size;
      const double stripe = std::sin(6.283185307179586 * freq * t);
      for (int c = 0; c < 3; ++c)
      {
        const double leaf = base[c] + 40 * stripe;
        const double v = inside * leaf + (1 - inside) * 60 + rng.Uniform(-12, 12);
        img.pixels[(static_cast<std::size_t>(y) * size + x) * 3 + c] = Clamp(v);
      }
    }
  }
  return img;
}

void WriteCorpus(const fs::path &root, const std::map<std::string, int> &counts, std::uint64_t seed,
                 const ImageFactory &factory)
{
  int class_index = 0;
  for (const auto &[name, count] : counts)
  {
    fs::create_directories(root / name);
    Rng rng(DeriveSeed(seed, name));
    for (int i = 0; i < count; ++i)
    {
      data::EncodeRgb8(factory(rng, class_index), root / name / ("img_" + std::to_string(i) + ".png"));
    }
    ++class_index;
  }
}

data::DatasetIndex InMemoryIndex(const std::map<std::string, std::size_t> &counts)
{
  std::map<std::string, std::vector<data::ImageSample>> by_class;
  for (const auto &[name, count] : counts)
  {
    auto &list = by_class[name];
    for (std::size_t i = 0; i < count; ++i)
    {
      data::ImageSample s;
      const std::string file = "img_" + std::to_string(i) + ".png";
      s.sample_id = data::MakeSampleId(name, file);
      s.class_name = name;
      s.source_path = fs::path("/nonexistent") / name / file;
      list.push_back(std::move(s));
    }
  }
  return data::DatasetIndex("/nonexistent", std::move(by_class));
}

data::LabeledImages BlobImages(const std::vector<std::array<std::uint8_t, 3>> &colors, int per_class, int size,
                               std::uint64_t seed)
{
  data::LabeledImages out;
  out.resolution = size;
  Rng rng(seed);
  for (int i = 0; i < per_class; ++i)
  {
    for (std::size_t c = 0; c < colors.size(); ++c)
    {
      const auto img = ColorBlob(rng, size, colors[c]);
      out.pixels.insert(out.pixels.end(), img.pixels.begin(), img.pixels.end());
      out.labels.push_back(static_cast<int>(c));
      out.ids.push_back("blob/" + std::to_string(c) + "_" + std::to_string(i));
    }
  }
  return out;
}

}  // namespace herbclf::testing
