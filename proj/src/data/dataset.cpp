// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/data/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "herbclf/error.hpp"
#include "herbclf/hash.hpp"
#include "herbclf/parallel.hpp"

namespace herbclf::data
{

namespace fs = std::filesystem;

namespace
{

constexpr std::string_view kAugMarker = "__aug_";

// Splits "<stem>__aug_<op>.<ext>" into ("<stem>.<ext>", op).
std::optional<std::string> AugmentedParentName(const std::string &file_name)
{
  const fs::path p(file_name);
  const std::string stem = p.stem().string();
  const auto pos = stem.rfind(kAugMarker);
  if (pos == std::string::npos || pos == 0 || pos + kAugMarker.size() == stem.size())
  {
    return std::nullopt;
  }
  return stem.substr(0, pos) + p.extension().string();
}

std::string CsvField(const std::string &value)
{
  if (value.find_first_of(",\"\n") == std::string::npos)
  {
    return value;
  }
  std::string out = "\"";
  for (char c : value)
  {
    if (c == '"')
    {
      out += '"';
    }
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view ToString(Provenance p)
{
  return p == Provenance::original ? "original" : "augmented";
}

std::string MakeSampleId(std::string_view class_name, std::string_view file_name)
{
  std::string id(class_name);
  id += '/';
  id += file_name;
  return id;
}

const Image &ImageSample::LoadPixels()
{
  if (!pixels)
  {
    pixels = DecodeImage(source_path);
  }
  return *pixels;
}

DatasetIndex::DatasetIndex(fs::path root, std::map<std::string, std::vector<ImageSample>> samples_by_class)
    : root_(std::move(root)), samples_by_class_(std::move(samples_by_class))
{
  for (auto &[name, samples] : samples_by_class_)
  {
    classes_.push_back(name);  // std::map iterates in lexicographic order
    std::sort(samples.begin(), samples.end(),
              [](const ImageSample &a, const ImageSample &b) { return a.sample_id < b.sample_id; });
  }
  for (std::size_t c = 0; c < classes_.size(); ++c)
  {
    const auto &samples = samples_by_class_.at(classes_[c]);
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
      if (samples[i].class_name != classes_[c])
      {
        throw DataError("sample " + samples[i].sample_id + " filed under class " + classes_[c]);
      }
      if ((samples[i].provenance == Provenance::augmented) != samples[i].parent_id.has_value())
      {
        throw DataError("sample " + samples[i].sample_id + ": parent id must be set exactly for augmented samples");
      }
      if (!id_lookup_.emplace(samples[i].sample_id, std::pair{c, i}).second)
      {
        throw DataError("duplicate sample id " + samples[i].sample_id);
      }
    }
    total_ += samples.size();
  }
}

const std::vector<ImageSample> &DatasetIndex::samples(const std::string &class_name) const
{
  auto it = samples_by_class_.find(class_name);
  if (it == samples_by_class_.end())
  {
    throw DataError("unknown class " + class_name);
  }
  return it->second;
}

std::size_t DatasetIndex::count(const std::string &class_name) const { return samples(class_name).size(); }

std::map<std::string, std::size_t> DatasetIndex::counts() const
{
  std::map<std::string, std::size_t> out;
  for (const auto &[name, samples] : samples_by_class_)
  {
    out[name] = samples.size();
  }
  return out;
}

int DatasetIndex::label_of(const std::string &class_name) const
{
  auto it = std::lower_bound(classes_.begin(), classes_.end(), class_name);
  if (it == classes_.end() || *it != class_name)
  {
    throw DataError("unknown class " + class_name);
  }
  return static_cast<int>(it - classes_.begin());
}

const ImageSample *DatasetIndex::find(const std::string &sample_id) const
{
  auto it = id_lookup_.find(sample_id);
  if (it == id_lookup_.end())
  {
    return nullptr;
  }
  return &samples_by_class_.at(classes_[it->second.first])[it->second.second];
}

std::vector<const ImageSample *> DatasetIndex::all() const
{
  std::vector<const ImageSample *> out;
  out.reserve(total_);
  for (const auto &name : classes_)
  {
    for (const auto &s : samples_by_class_.at(name))
    {
      out.push_back(&s);
    }
  }
  return out;
}

DatasetIndex LoadIndex(const fs::path &root, LoadReport *report)
{
  std::error_code ec;
  if (!fs::is_directory(root, ec))
  {
    throw DataError("corpus root " + root.string() + " does not exist or is not a directory");
  }
  LoadReport local;
  LoadReport &rep = report ? *report : local;

  struct Candidate
  {
    std::string class_name;
    fs::path path;
    bool decodable = false;
  };
  std::vector<Candidate> candidates;
  std::map<std::string, std::vector<ImageSample>> by_class;

  std::vector<fs::path> class_dirs;
  for (const auto &entry : fs::directory_iterator(root))
  {
    const std::string name = entry.path().filename().string();
    if (entry.is_directory() && !name.starts_with('.'))
    {
      class_dirs.push_back(entry.path());
    }
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  for (const auto &dir : class_dirs)
  {
    const std::string class_name = dir.filename().string();
    by_class[class_name];
    std::vector<fs::path> files;
    for (const auto &entry : fs::directory_iterator(dir))
    {
      if (entry.is_regular_file() && !entry.path().filename().string().starts_with('.'))
      {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (auto &f : files)
    {
      if (IsImageExtension(f))
      {
        candidates.push_back({class_name, std::move(f)});
      }
      else
      {
        rep.skipped_files.push_back(std::move(f));
      }
    }
  }

  ParallelFor(static_cast<std::ptrdiff_t>(candidates.size()),
              [&](std::ptrdiff_t i) { candidates[i].decodable = TryDecodeRgb8(candidates[i].path).has_value(); });

  std::map<std::string, std::set<std::string>> names_by_class;
  for (const auto &c : candidates)
  {
    if (c.decodable)
    {
      names_by_class[c.class_name].insert(c.path.filename().string());
    }
  }

  for (auto &c : candidates)
  {
    if (!c.decodable)
    {
      rep.skipped_files.push_back(c.path);
      rep.warnings.push_back("undecodable image skipped: " + c.path.string());
      continue;
    }
    const std::string file_name = c.path.filename().string();
    ImageSample sample;
    sample.sample_id = MakeSampleId(c.class_name, file_name);
    sample.class_name = c.class_name;
    sample.source_path = c.path;
    if (auto parent = AugmentedParentName(file_name))
    {
      if (names_by_class[c.class_name].contains(*parent))
      {
        sample.provenance = Provenance::augmented;
        sample.parent_id = MakeSampleId(c.class_name, *parent);
      }
      else
      {
        rep.warnings.push_back("augmented-looking file without parent treated as original: " + c.path.string());
      }
    }
    by_class[c.class_name].push_back(std::move(sample));
  }

  for (const auto &[name, samples] : by_class)
  {
    if (samples.empty())
    {
      rep.empty_classes.push_back(name);
      rep.warnings.push_back("class " + name + " has no decodable images");
    }
  }
  return DatasetIndex(root, std::move(by_class));
}

void WriteManifestCsv(const DatasetIndex &index, const fs::path &path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw DataError("cannot write manifest " + path.string());
  }
  out << "sample_id,class_name,provenance,parent_id,path\n";
  for (const ImageSample *s : index.all())
  {
    out << CsvField(s->sample_id) << ',' << CsvField(s->class_name) << ',' << ToString(s->provenance) << ','
        << CsvField(s->parent_id.value_or("")) << ',' << CsvField(s->source_path.string()) << '\n';
  }
  if (!out)
  {
    throw DataError("failed writing manifest " + path.string());
  }
}

std::string DatasetDigest(const DatasetIndex &index)
{
  const auto samples = index.all();
  std::vector<std::string> lines(samples.size());
  ParallelFor(static_cast<std::ptrdiff_t>(samples.size()), [&](std::ptrdiff_t i) {
    lines[i] = samples[i]->sample_id + ' ' + GitBlobHash(ReadFileBytes(samples[i]->source_path)) + '\n';
  });
  std::string joined;
  for (const auto &l : lines)
  {
    joined += l;
  }
  return Sha1Hex(joined);
}

}  // namespace herbclf::data
