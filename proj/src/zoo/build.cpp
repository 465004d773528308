// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/zoo/build.hpp"

#include "herbclf/error.hpp"
#include "herbclf/zoo/scratch_cnn.hpp"

namespace herbclf::zoo
{

template <typename T>
std::unique_ptr<Model<T>> BuildModel(const ModelSpec &spec, std::uint64_t seed, const BuildOptions &options)
{
  spec.Validate();
  if (spec.architecture == Architecture::scratch)
  {
    return std::make_unique<ScratchCnn<T>>(spec, seed);
  }
  if constexpr (std::is_same_v<T, float>)
  {
    const auto artifact =
        options.artifact.empty() ? ArtifactPath(spec.architecture, options.weights_dir) : options.artifact;
    return LoadBackbone(spec, artifact, seed);
  }
  else
  {
    throw UsageError(std::string(ToString(spec.architecture)) + " is only available in single precision");
  }
}

template std::unique_ptr<Model<float>> BuildModel(const ModelSpec &, std::uint64_t, const BuildOptions &);
template std::unique_ptr<Model<double>> BuildModel(const ModelSpec &, std::uint64_t, const BuildOptions &);

}  // namespace herbclf::zoo
