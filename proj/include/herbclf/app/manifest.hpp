// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_APP_MANIFEST_HPP
#define HERBCLF_APP_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace herbclf::app
{

inline constexpr const char *kRunManifest = "run.json";

// Written as run.json into every directory a command produces.
struct RunManifest
{
  std::string command;
  std::vector<std::string> args;
  std::filesystem::path config_path;
  std::string dataset_digest;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::filesystem::path output_dir;
  std::string input_hash;  // git blob hash over the canonical input description
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

std::string UtcTimestamp();

// Hash of the JSON text, in git blob form.
std::string InputHash(const nlohmann::ordered_json &inputs);

void WriteRunManifest(const RunManifest &manifest);
RunManifest ReadRunManifest(const std::filesystem::path &dir);

}  // namespace herbclf::app

#endif  // HERBCLF_APP_MANIFEST_HPP
