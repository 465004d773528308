// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// Fallback for builds without libtorch.

#include "herbclf/error.hpp"
#include "herbclf/zoo/backbone.hpp"

namespace herbclf::zoo
{

namespace
{
[[noreturn]] void Unsupported()
{
  throw ArtifactUnavailable("this build of herbclf has no pretrained backbone support; reconfigure with "
                            "-DHERBCLF_WITH_TORCH=ON and a libtorch installation");
}
}  // namespace

bool BackbonesSupported() noexcept { return false; }

void SetBackboneDeterminism(bool) {}

ArtifactInfo ReadArtifactInfo(const std::filesystem::path &) { Unsupported(); }

std::vector<NamedTensor<float>> ReadArtifactParameters(const std::filesystem::path &) { Unsupported(); }

std::unique_ptr<Model<float>> LoadBackbone(const ModelSpec &, const std::filesystem::path &, std::uint64_t)
{
  Unsupported();
}

}  // namespace herbclf::zoo
