// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/zoo/backbone.hpp"

#include <cstdlib>
#include <map>

#include "herbclf/error.hpp"

namespace herbclf::zoo
{

const BackboneHead &HeadFor(Architecture arch)
{
  static const std::map<Architecture, BackboneHead> heads{
      {Architecture::resnet34, {"fc", 512, 1000}},
      {Architecture::densenet121, {"classifier", 1024, 1000}},
      {Architecture::vgg11_bn, {"classifier.6", 4096, 1000}},
      {Architecture::convnext_base, {"classifier.2", 1024, 1000}},
      {Architecture::swin_t, {"head", 768, 1000}},
  };
  auto it = heads.find(arch);
  if (it == heads.end())
  {
    throw UsageError(std::string(ToString(arch)) + " is not a pretrained backbone");
  }
  return it->second;
}

std::filesystem::path DefaultWeightsDir()
{
  if (const char *dir = std::getenv("HERBCLF_WEIGHTS_DIR"); dir && *dir)
  {
    return dir;
  }
  if (const char *home = std::getenv("HOME"); home && *home)
  {
    return std::filesystem::path(home) / ".cache" / "herbclf" / "weights";
  }
  return ".herbclf-weights";
}

std::filesystem::path ArtifactPath(Architecture arch, const std::filesystem::path &weights_dir)
{
  return weights_dir / (std::string(ToString(arch)) + ".pt");
}

std::string FetchInstructions(Architecture arch, const std::filesystem::path &weights_dir)
{
  const std::string name(ToString(arch));
  return "published " + name + " weights not found at " + ArtifactPath(arch, weights_dir).string() +
         "\n  fetch and convert them with:\n    python3 tools/export_backbone.py --arch " + name + " --out " +
         weights_dir.string() +
         "\n  (downloads the torchvision IMAGENET1K_V1 checkpoint; on an offline machine pass"
         "\n   --state-dict <file.pth> with a manually copied checkpoint)"
         "\n  or point HERBCLF_WEIGHTS_DIR at an existing weight cache";
}

}  // namespace herbclf::zoo
