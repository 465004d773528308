// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/data/image.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "herbclf/error.hpp"

namespace herbclf::data
{

namespace
{

Rgb8Image FromBgrMat(const cv::Mat &bgr)
{
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  Rgb8Image out;
  out.height = rgb.rows;
  out.width = rgb.cols;
  out.pixels.resize(static_cast<std::size_t>(rgb.rows) * rgb.cols * 3);
  for (int y = 0; y < rgb.rows; ++y)
  {
    const auto *src = rgb.ptr<std::uint8_t>(y);
    std::copy(src, src + static_cast<std::size_t>(rgb.cols) * 3,
              out.pixels.begin() + static_cast<std::ptrdiff_t>(y) * rgb.cols * 3);
  }
  return out;
}

cv::Mat ToBgrMat(const Rgb8Image &image)
{
  cv::Mat rgb(image.height, image.width, CV_8UC3, const_cast<std::uint8_t *>(image.pixels.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}

std::string LowerExtension(const std::filesystem::path &path)
{
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

}  // namespace

std::optional<Rgb8Image> TryDecodeRgb8(const std::filesystem::path &path)
{
  // IMREAD_COLOR replicates gray and drops alpha.
  cv::Mat bgr;
  try
  {
    bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  }
  catch (const cv::Exception &)
  {
    return std::nullopt;
  }
  if (bgr.empty())
  {
    return std::nullopt;
  }
  return FromBgrMat(bgr);
}

Rgb8Image DecodeRgb8(const std::filesystem::path &path)
{
  auto image = TryDecodeRgb8(path);
  if (!image)
  {
    throw DataError("cannot decode image " + path.string());
  }
  return std::move(*image);
}

Image DecodeImage(const std::filesystem::path &path) { return ToUnitRange(DecodeRgb8(path)); }

Image ToUnitRange(const Rgb8Image &image)
{
  Image out;
  out.height = image.height;
  out.width = image.width;
  out.pixels.resize(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), out.pixels.begin(),
                 [](std::uint8_t v) { return static_cast<float>(v) / 255.0f; });
  return out;
}

Rgb8Image ToRgb8(const Image &image)
{
  Rgb8Image out;
  out.height = image.height;
  out.width = image.width;
  out.pixels.resize(image.pixels.size());
  std::transform(image.pixels.begin(), image.pixels.end(), out.pixels.begin(), [](float v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
  });
  return out;
}

void EncodeRgb8(const Rgb8Image &image, const std::filesystem::path &path)
{
  if (image.height <= 0 || image.width <= 0)
  {
    throw DataError("refusing to encode an empty image to " + path.string());
  }
  std::vector<int> params;
  const std::string ext = LowerExtension(path);
  if (ext == ".jpg" || ext == ".jpeg")
  {
    params = {cv::IMWRITE_JPEG_QUALITY, 95};
  }
  else if (ext == ".png")
  {
    params = {cv::IMWRITE_PNG_COMPRESSION, 6};
  }
  bool ok = false;
  try
  {
    ok = cv::imwrite(path.string(), ToBgrMat(image), params);
  }
  catch (const cv::Exception &e)
  {
    throw DataError("cannot encode " + path.string() + ": " + e.what());
  }
  if (!ok)
  {
    throw DataError("cannot write image " + path.string());
  }
}

void EncodeImage(const Image &image, const std::filesystem::path &path) { EncodeRgb8(ToRgb8(image), path); }

Rgb8Image ResizeSquare(const Rgb8Image &image, int size)
{
  if (image.height <= 0 || image.width <= 0)
  {
    throw DataError("cannot resize a zero-area image");
  }
  if (size <= 0)
  {
    throw UsageError("target resolution must be positive, got " + std::to_string(size));
  }
  if (image.height == size && image.width == size)
  {
    return image;
  }
  cv::Mat src(image.height, image.width, CV_8UC3, const_cast<std::uint8_t *>(image.pixels.data()));
  cv::Mat dst;
  cv::resize(src, dst, cv::Size(size, size), 0, 0, cv::INTER_LINEAR);
  Rgb8Image out;
  out.height = size;
  out.width = size;
  out.pixels.assign(dst.data, dst.data + static_cast<std::size_t>(size) * size * 3);
  return out;
}

bool IsImageExtension(const std::filesystem::path &path)
{
  static const std::array<std::string, 9> kExtensions{".jpg", ".jpeg", ".png", ".bmp", ".webp",
                                                      ".tif", ".tiff", ".ppm", ".pgm"};
  const std::string ext = LowerExtension(path);
  return std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end();
}

}  // namespace herbclf::data
