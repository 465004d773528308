// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/augment/ops.hpp"

#include <string>

#include "herbclf/error.hpp"

namespace herbclf::augment
{

namespace
{

// out(y, x) = in(Source(op, y, x)) for an h x w image.
struct SourceCoord
{
  int y;
  int x;
};

SourceCoord Source(AugmentationOp op, int y, int x, int h, int w)
{
  switch (op)
  {
  case AugmentationOp::hflip:
    return {y, w - 1 - x};
  case AugmentationOp::vflip:
    return {h - 1 - y, x};
  case AugmentationOp::rot90:
    return {x, w - 1 - y};
  case AugmentationOp::rot180:
    return {h - 1 - y, w - 1 - x};
  case AugmentationOp::rot270:
    return {h - 1 - x, y};
  case AugmentationOp::hflip_rot90:
    // rot90 reads (x, w-1-y) of the flipped image, which reads column w-1-(w-1-y).
    return {x, y};
  case AugmentationOp::vflip_rot90:
    return {h - 1 - x, w - 1 - y};
  }
  return {y, x};
}

template <typename ImageT>
ImageT ApplyImpl(const ImageT &image, AugmentationOp op)
{
  if (IsRotation(op) && !image.square())
  {
    throw DataError("rotation op " + std::string(OpName(op)) + " needs a square image, got " +
                    std::to_string(image.height) + "x" + std::to_string(image.width));
  }
  ImageT out = image;
  const int h = image.height;
  const int w = image.width;
  for (int y = 0; y < h; ++y)
  {
    for (int x = 0; x < w; ++x)
    {
      const auto src = Source(op, y, x, h, w);
      const std::size_t to = (static_cast<std::size_t>(y) * w + x) * 3;
      const std::size_t from = (static_cast<std::size_t>(src.y) * w + src.x) * 3;
      for (int c = 0; c < 3; ++c)
      {
        out.pixels[to + c] = image.pixels[from + c];
      }
    }
  }
  return out;
}

}  // namespace

std::string_view OpName(AugmentationOp op)
{
  switch (op)
  {
  case AugmentationOp::hflip:
    return "hflip";
  case AugmentationOp::vflip:
    return "vflip";
  case AugmentationOp::rot90:
    return "rot90";
  case AugmentationOp::rot180:
    return "rot180";
  case AugmentationOp::rot270:
    return "rot270";
  case AugmentationOp::hflip_rot90:
    return "hflip_rot90";
  case AugmentationOp::vflip_rot90:
    return "vflip_rot90";
  }
  return "unknown";
}

std::optional<AugmentationOp> ParseOp(std::string_view name)
{
  for (AugmentationOp op : kOpOrder)
  {
    if (OpName(op) == name)
    {
      return op;
    }
  }
  return std::nullopt;
}

bool IsRotation(AugmentationOp op) { return op != AugmentationOp::hflip && op != AugmentationOp::vflip; }

data::Image ApplyOp(const data::Image &image, AugmentationOp op) { return ApplyImpl(image, op); }

data::Rgb8Image ApplyOp(const data::Rgb8Image &image, AugmentationOp op) { return ApplyImpl(image, op); }

}  // namespace herbclf::augment
