// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_DATA_DATASET_HPP
#define HERBCLF_DATA_DATASET_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "herbclf/data/image.hpp"

namespace herbclf::data
{

enum class Provenance
{
  original,
  augmented
};

std::string_view ToString(Provenance p);

struct ImageSample
{
  std::string sample_id;  // "<class>/<file name>"
  std::string class_name;
  std::filesystem::path source_path;
  Provenance provenance = Provenance::original;
  std::optional<std::string> parent_id;  // set iff augmented
  std::optional<Image> pixels;           // populated on demand

  const Image &LoadPixels();
};

std::string MakeSampleId(std::string_view class_name, std::string_view file_name);

// What load_index noticed but did not treat as fatal.
struct LoadReport
{
  std::vector<std::filesystem::path> skipped_files;
  std::vector<std::string> empty_classes;
  std::vector<std::string> warnings;
};

// Class catalog plus per-class sample lists. Class order is lexicographic
// and defines the label encoding. Immutable once built.
class DatasetIndex
{
public:
  DatasetIndex() = default;
  DatasetIndex(std::filesystem::path root, std::map<std::string, std::vector<ImageSample>> samples_by_class);

  const std::filesystem::path &root() const noexcept { return root_; }
  const std::vector<std::string> &classes() const noexcept { return classes_; }
  std::size_t num_classes() const noexcept { return classes_.size(); }

  const std::vector<ImageSample> &samples(const std::string &class_name) const;
  std::size_t count(const std::string &class_name) const;
  std::map<std::string, std::size_t> counts() const;
  std::size_t total() const noexcept { return total_; }

  // Rank of the class in lexicographic order.
  int label_of(const std::string &class_name) const;

  const ImageSample *find(const std::string &sample_id) const;

  // Every sample, class-major, sample ids ascending within a class.
  std::vector<const ImageSample *> all() const;

private:
  std::filesystem::path root_;
  std::vector<std::string> classes_;
  std::map<std::string, std::vector<ImageSample>> samples_by_class_;
  std::map<std::string, std::pair<std::size_t, std::size_t>> id_lookup_;  // id -> (class idx, position)
  std::size_t total_ = 0;
};

// Loads <root>/<class>/<image files>. Hidden entries are ignored. Files named
// <stem>__aug_<op>.<ext> whose parent <stem>.<ext> sits in the same class are
// registered as augmented children of it; everything else is original.
DatasetIndex LoadIndex(const std::filesystem::path &root, LoadReport *report = nullptr);

// CSV: sample_id,class_name,provenance,parent_id,path
void WriteManifestCsv(const DatasetIndex &index, const std::filesystem::path &path);

// Order-independent digest of a corpus: SHA-1 over "<id> <git blob hash>" lines.
std::string DatasetDigest(const DatasetIndex &index);

}  // namespace herbclf::data

#endif  // HERBCLF_DATA_DATASET_HPP
