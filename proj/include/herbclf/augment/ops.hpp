// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_AUGMENT_OPS_HPP
#define HERBCLF_AUGMENT_OPS_HPP

#include <array>
#include <optional>
#include <string_view>

#include "herbclf/data/image.hpp"

namespace herbclf::augment
{

// The seven non-identity symmetries of the square. Composite ops flip first
// and then rotate, as one pixel permutation.
enum class AugmentationOp
{
  hflip,
  vflip,
  rot90,  // counter-clockwise
  rot180,
  rot270,
  hflip_rot90,
  vflip_rot90
};

// Fixed order in which balance planning hands out ops.
inline constexpr std::array<AugmentationOp, 7> kOpOrder{
    AugmentationOp::hflip,  AugmentationOp::vflip,       AugmentationOp::rot90,      AugmentationOp::rot180,
    AugmentationOp::rot270, AugmentationOp::hflip_rot90, AugmentationOp::vflip_rot90};

std::string_view OpName(AugmentationOp op);
std::optional<AugmentationOp> ParseOp(std::string_view name);

bool IsRotation(AugmentationOp op);

// Exact pixel permutation; no interpolation. Rotations require a square
// image and throw DataError otherwise.
data::Image ApplyOp(const data::Image &image, AugmentationOp op);
data::Rgb8Image ApplyOp(const data::Rgb8Image &image, AugmentationOp op);

}  // namespace herbclf::augment

#endif  // HERBCLF_AUGMENT_OPS_HPP
