// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/train/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "herbclf/error.hpp"

namespace herbclf::train
{

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace
{

constexpr std::array<char, 8> kMagic{'H', 'E', 'R', 'B', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
constexpr const char *DtypeName()
{
  return sizeof(T) == 4 ? "f32" : "f64";
}

struct Parsed
{
  CheckpointInfo info;
  nlohmann::json tensors;
  std::streamoff data_start = 0;
};

Parsed ParseHeader(std::ifstream &in, const std::filesystem::path &path)
{
  std::array<char, 8> magic{};
  std::uint32_t version = 0;
  std::uint64_t header_len = 0;
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char *>(&version), sizeof version);
  in.read(reinterpret_cast<char *>(&header_len), sizeof header_len);
  if (!in || magic != kMagic)
  {
    throw DataError(path.string() + " is not a herbclf checkpoint");
  }
  if (version != kVersion)
  {
    throw DataError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  }
  if (header_len > (1u << 30))
  {
    throw DataError(path.string() + ": corrupt checkpoint header");
  }
  std::string text(header_len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(header_len));
  if (!in)
  {
    throw DataError(path.string() + ": truncated checkpoint header");
  }
  Parsed out;
  try
  {
    const auto doc = nlohmann::json::parse(text);
    out.info.spec = zoo::ModelSpecFromJson(doc.at("model"));
    out.info.seed = doc.at("seed").get<std::uint64_t>();
    out.info.epoch = doc.at("epoch").get<int>();
    out.info.dataset = doc.at("dataset").get<std::string>();
    out.info.class_names = doc.at("class_names").get<std::vector<std::string>>();
    out.info.normalization = data::ParseNormalization(doc.at("normalization").get<std::string>());
    out.info.dtype = doc.at("dtype").get<std::string>();
    out.tensors = doc.at("tensors");
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError(path.string() + ": malformed checkpoint header: " + e.what());
  }
  if (out.info.dtype != "f32" && out.info.dtype != "f64")
  {
    throw DataError(path.string() + ": unknown dtype " + out.info.dtype);
  }
  out.data_start = in.tellg();
  return out;
}

template <typename S, typename T>
void ReadInto(std::ifstream &in, std::vector<T> &dst, std::size_t n)
{
  std::vector<S> buf(n);
  in.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(n * sizeof(S)));
  dst.assign(buf.begin(), buf.end());
}

}  // namespace

std::string CheckpointFileName(zoo::Architecture arch, const std::string &dataset, int epoch)
{
  return std::string(zoo::ToString(arch)) + "_" + dataset + "_" + std::to_string(epoch) + ".ckpt";
}

template <typename T>
void SaveCheckpoint(const std::filesystem::path &path, const CheckpointInfo &info,
                    const std::vector<zoo::NamedTensor<T>> &state)
{
  nlohmann::ordered_json header;
  header["model"] = zoo::ToJson(info.spec);
  header["seed"] = info.seed;
  header["epoch"] = info.epoch;
  header["dataset"] = info.dataset;
  header["class_names"] = info.class_names;
  header["normalization"] = data::ToString(info.normalization);
  header["dtype"] = DtypeName<T>();
  auto &table = header["tensors"] = nlohmann::ordered_json::array();
  for (const auto &t : state)
  {
    if (t.values.size() != nn::NumElements(t.shape))
    {
      throw Error("tensor '" + t.name + "' data does not match its shape");
    }
    table.push_back({{"name", t.name}, {"shape", t.shape}});
  }
  const std::string text = header.dump();
  const std::uint64_t header_len = text.size();

  const auto tmp = path.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw DataError("cannot write checkpoint " + path.string());
    }
    out.write(kMagic.data(), kMagic.size());
    out.write(reinterpret_cast<const char *>(&kVersion), sizeof kVersion);
    out.write(reinterpret_cast<const char *>(&header_len), sizeof header_len);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto &t : state)
    {
      out.write(reinterpret_cast<const char *>(t.values.data()), static_cast<std::streamsize>(t.values.size() * sizeof(T)));
    }
    if (!out)
    {
      throw DataError("failed writing checkpoint " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

CheckpointInfo ReadCheckpointInfo(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open checkpoint " + path.string());
  }
  return ParseHeader(in, path).info;
}

template <typename T>
std::vector<zoo::NamedTensor<T>> ReadCheckpointState(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open checkpoint " + path.string());
  }
  const auto parsed = ParseHeader(in, path);
  std::vector<zoo::NamedTensor<T>> out;
  try
  {
    for (const auto &entry : parsed.tensors)
    {
      zoo::NamedTensor<T> t;
      t.name = entry.at("name").get<std::string>();
      t.shape = entry.at("shape").get<nn::Shape>();
      const auto n = nn::NumElements(t.shape);
      if (parsed.info.dtype == "f32")
        ReadInto<float>(in, t.values, n);
      else
        ReadInto<double>(in, t.values, n);
      if (!in)
      {
        throw DataError(path.string() + ": truncated data for tensor '" + t.name + "'");
      }
      out.push_back(std::move(t));
    }
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError(path.string() + ": malformed tensor table: " + e.what());
  }
  return out;
}

template void SaveCheckpoint(const std::filesystem::path &, const CheckpointInfo &,
                             const std::vector<zoo::NamedTensor<float>> &);
template void SaveCheckpoint(const std::filesystem::path &, const CheckpointInfo &,
                             const std::vector<zoo::NamedTensor<double>> &);
template std::vector<zoo::NamedTensor<float>> ReadCheckpointState(const std::filesystem::path &);
template std::vector<zoo::NamedTensor<double>> ReadCheckpointState(const std::filesystem::path &);

}  // namespace herbclf::train
