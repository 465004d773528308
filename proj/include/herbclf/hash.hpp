// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_HASH_HPP
#define HERBCLF_HASH_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace herbclf
{

std::uint64_t Fnv1a64(std::span<const std::uint8_t> bytes);
std::uint64_t Fnv1a64(std::string_view text);

// Lowercase hex SHA-1.
std::string Sha1Hex(std::span<const std::uint8_t> bytes);
std::string Sha1Hex(std::string_view text);

// SHA-1 of "blob <size>\0<content>", i.e. what `git hash-object` prints.
std::string GitBlobHash(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path &path);

}  // namespace herbclf

#endif  // HERBCLF_HASH_HPP
