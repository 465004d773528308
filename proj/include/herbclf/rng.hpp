// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_RNG_HPP
#define HERBCLF_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <random>
#include <string_view>
#include <utility>

namespace herbclf
{

// Seeded generator with platform-independent derived distributions.
//
// std::mt19937_64 has a fully specified output sequence, but the standard
// distributions and std::shuffle do not. Everything that must reproduce
// bit-for-bit across toolchains (splits, balance plans, initial weights)
// goes through the helpers below instead.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform01() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform integer in [0, n), rejection sampled. n must be > 0.
  std::uint64_t Below(std::uint64_t n)
  {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do
    {
      x = Next();
    } while (x >= limit);
    return x % n;
  }

  // Fisher-Yates.
  template <typename RandomIt>
  void Shuffle(RandomIt first, RandomIt last)
  {
    const auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i)
    {
      const auto j = Below(i);
      using std::swap;
      swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(j)]);
    }
  }

private:
  std::mt19937_64 engine_;
};

// Independent stream seed for a named sub-task (a class, an epoch, a layer).
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label);
std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t index);

}  // namespace herbclf

#endif  // HERBCLF_RNG_HPP
