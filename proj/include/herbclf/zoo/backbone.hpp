// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_ZOO_BACKBONE_HPP
#define HERBCLF_ZOO_BACKBONE_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "herbclf/zoo/model.hpp"

namespace herbclf::zoo
{

// Pretrained backbones are consumed as TorchScript archives exported from
// the upstream torchvision definitions and weights (tools/export_backbone.py).
// Only the final classifier layer is touched here.

struct BackboneHead
{
  std::string module_path;  // dotted path of the final nn.Linear
  std::size_t in_features;
  std::size_t upstream_classes;
};

// Throws UsageError for scratch.
const BackboneHead &HeadFor(Architecture arch);

// Metadata stored inside the archive by the export tool.
struct ArtifactInfo
{
  std::string architecture;
  std::string source;      // "published" or "random-init"
  std::string weights_id;  // upstream weight name or file
};

// $HERBCLF_WEIGHTS_DIR, else $HOME/.cache/herbclf/weights.
std::filesystem::path DefaultWeightsDir();
std::filesystem::path ArtifactPath(Architecture arch, const std::filesystem::path &weights_dir);
std::string FetchInstructions(Architecture arch, const std::filesystem::path &weights_dir);

// Whether this build links libtorch.
bool BackbonesSupported() noexcept;

// Restricts libtorch to deterministic algorithms. The native kernels are
// deterministic regardless.
void SetBackboneDeterminism(bool deterministic);

ArtifactInfo ReadArtifactInfo(const std::filesystem::path &artifact);

// Parameters exactly as stored in the archive, before any adaptation.
std::vector<NamedTensor<float>> ReadArtifactParameters(const std::filesystem::path &artifact);

// Loads the archive and swaps the final linear layer for a fresh
// (num_classes x in_features) one initialised from U(+-1/sqrt(in_features))
// under `seed`. Every other parameter is left as loaded, and all of them
// are trainable. Throws ArtifactUnavailable if the archive is missing.
std::unique_ptr<Model<float>> LoadBackbone(const ModelSpec &spec, const std::filesystem::path &artifact,
                                           std::uint64_t seed);

}  // namespace herbclf::zoo

#endif  // HERBCLF_ZOO_BACKBONE_HPP
