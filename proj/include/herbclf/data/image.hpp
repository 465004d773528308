// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_DATA_IMAGE_HPP
#define HERBCLF_DATA_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace herbclf::data
{

// Interleaved RGB, row-major (H x W x 3). Values are reals; decoded images
// land in [0, 1].
struct Image
{
  int height = 0;
  int width = 0;
  std::vector<float> pixels;

  Image() = default;
  Image(int h, int w, float fill = 0.0f)
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * w * 3, fill)
  {
  }

  float &at(int y, int x, int c) { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  float at(int y, int x, int c) const { return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }

  bool empty() const noexcept { return height == 0 || width == 0; }
  bool square() const noexcept { return height == width; }

  friend bool operator==(const Image &, const Image &) = default;
};

// 8-bit RGB, same layout as Image. Resampling is done in this domain.
struct Rgb8Image
{
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  bool square() const noexcept { return height == width; }

  friend bool operator==(const Rgb8Image &, const Rgb8Image &) = default;
};

// Decodes to 8-bit RGB. Grayscale is replicated across channels and alpha
// is dropped. Throws DataError if the file cannot be decoded.
Rgb8Image DecodeRgb8(const std::filesystem::path &path);
std::optional<Rgb8Image> TryDecodeRgb8(const std::filesystem::path &path);

Image DecodeImage(const std::filesystem::path &path);

// Writes with the encoder implied by the extension. Values are clamped to
// [0, 1] and rounded to 8 bits; an image decoded from 8 bits round-trips
// exactly through PNG.
void EncodeImage(const Image &image, const std::filesystem::path &path);
void EncodeRgb8(const Rgb8Image &image, const std::filesystem::path &path);

Image ToUnitRange(const Rgb8Image &image);
Rgb8Image ToRgb8(const Image &image);

// Bilinear resampling to size x size. Throws DataError on a zero-area input.
Rgb8Image ResizeSquare(const Rgb8Image &image, int size);

bool IsImageExtension(const std::filesystem::path &path);

}  // namespace herbclf::data

#endif  // HERBCLF_DATA_IMAGE_HPP
