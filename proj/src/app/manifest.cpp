// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/app/manifest.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "herbclf/error.hpp"
#include "herbclf/hash.hpp"

namespace herbclf::app
{

std::string UtcTimestamp()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string InputHash(const nlohmann::ordered_json &inputs)
{
  const std::string text = inputs.dump();
  return GitBlobHash({reinterpret_cast<const std::uint8_t *>(text.data()), text.size()});
}

void WriteRunManifest(const RunManifest &m)
{
  nlohmann::ordered_json doc;
  doc["command"] = m.command;
  doc["args"] = m.args;
  doc["config_path"] = m.config_path.string();
  doc["dataset_digest"] = m.dataset_digest;
  doc["seed"] = m.seed;
  doc["started_at"] = m.started_at;
  doc["finished_at"] = m.finished_at;
  doc["output_dir"] = m.output_dir.string();
  doc["input_hash"] = m.input_hash;
  doc["details"] = m.details;
  const auto path = m.output_dir / kRunManifest;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.dump(2) << '\n';
  if (!out)
  {
    throw DataError("cannot write " + path.string());
  }
}

RunManifest ReadRunManifest(const std::filesystem::path &dir)
{
  const auto path = dir / kRunManifest;
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open " + path.string());
  }
  try
  {
    const auto doc = nlohmann::ordered_json::parse(in);
    RunManifest m;
    m.command = doc.at("command").get<std::string>();
    m.args = doc.at("args").get<std::vector<std::string>>();
    m.config_path = doc.at("config_path").get<std::string>();
    m.dataset_digest = doc.at("dataset_digest").get<std::string>();
    m.seed = doc.at("seed").get<std::uint64_t>();
    m.started_at = doc.at("started_at").get<std::string>();
    m.finished_at = doc.at("finished_at").get<std::string>();
    m.output_dir = doc.at("output_dir").get<std::string>();
    m.input_hash = doc.at("input_hash").get<std::string>();
    m.details = doc.at("details");
    return m;
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace herbclf::app
