// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/rng.hpp"

#include "herbclf/hash.hpp"

namespace herbclf
{

namespace
{

std::uint64_t SplitMix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label)
{
  return SplitMix64(SplitMix64(seed) ^ Fnv1a64(label));
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index)
{
  return SplitMix64(SplitMix64(seed) + SplitMix64(~index));
}

}  // namespace herbclf
