// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>
#include <torch/script.h>

#include "herbclf/error.hpp"
#include "herbclf/rng.hpp"
#include "herbclf/zoo/backbone.hpp"

namespace herbclf::zoo
{

namespace
{

constexpr const char *kMetadataFile = "herbclf.json";

struct Archive
{
  torch::jit::Module module;
  ArtifactInfo info;
};

Archive LoadArchive(const std::filesystem::path &artifact)
{
  if (!std::filesystem::is_regular_file(artifact))
  {
    throw ArtifactUnavailable("weight artifact " + artifact.string() + " does not exist");
  }
  torch::jit::ExtraFilesMap extra{{kMetadataFile, ""}};
  Archive out;
  try
  {
    out.module = torch::jit::load(artifact.string(), torch::kCPU, extra);
  }
  catch (const c10::Error &e)
  {
    throw DataError("cannot load TorchScript archive " + artifact.string() + ": " + e.what_without_backtrace());
  }
  const auto &meta = extra[kMetadataFile];
  if (meta.empty())
  {
    throw DataError(artifact.string() + " carries no " + kMetadataFile + "; export it with tools/export_backbone.py");
  }
  try
  {
    const auto doc = nlohmann::json::parse(meta);
    out.info.architecture = doc.at("architecture").get<std::string>();
    out.info.source = doc.at("source").get<std::string>();
    out.info.weights_id = doc.value("weights", "");
  }
  catch (const nlohmann::json::exception &e)
  {
    throw DataError("malformed " + std::string(kMetadataFile) + " in " + artifact.string() + ": " + e.what());
  }
  return out;
}

torch::jit::Module Submodule(torch::jit::Module root, const std::string &dotted)
{
  std::stringstream parts(dotted);
  std::string part;
  while (std::getline(parts, part, '.'))
  {
    if (!root.hasattr(part))
    {
      throw DataError("backbone has no submodule '" + dotted + "'");
    }
    root = root.attr(part).toModule();
  }
  return root;
}

NamedTensor<float> ToNamed(const std::string &name, const torch::Tensor &t)
{
  const auto f = t.detach().to(torch::kFloat32).contiguous();
  NamedTensor<float> out;
  out.name = name;
  for (auto d : f.sizes())
  {
    out.shape.push_back(static_cast<std::size_t>(d));
  }
  out.values.assign(f.data_ptr<float>(), f.data_ptr<float>() + f.numel());
  return out;
}

class TorchBackbone final : public Model<float>
{
public:
  TorchBackbone(const ModelSpec &spec, Archive archive, std::uint64_t seed) : spec_(spec), module_(archive.module)
  {
    const auto &head = HeadFor(spec.architecture);
    if (archive.info.architecture != ToString(spec.architecture))
    {
      throw DataError("artifact holds " + archive.info.architecture + ", expected " +
                      std::string(ToString(spec.architecture)));
    }
    auto linear = Submodule(module_, head.module_path);
    const auto old_weight = linear.attr("weight").toTensor();
    if (old_weight.dim() != 2 || old_weight.size(1) != static_cast<int64_t>(head.in_features))
    {
      throw DataError("unexpected head shape in " + std::string(ToString(spec.architecture)) + " artifact");
    }

    const auto k = static_cast<int64_t>(spec.num_classes);
    const auto f = static_cast<int64_t>(head.in_features);
    Rng rng(DeriveSeed(seed, "head-init"));
    const double bound = 1.0 / std::sqrt(static_cast<double>(f));
    auto weight = torch::empty({k, f}, torch::kFloat32);
    auto bias = torch::empty({k}, torch::kFloat32);
    for (auto *t : {&weight, &bias})
    {
      auto *p = t->data_ptr<float>();
      for (int64_t i = 0; i < t->numel(); ++i)
      {
        p[i] = static_cast<float>(rng.Uniform(-bound, bound));
      }
    }
    linear.register_parameter("weight", weight, false);
    linear.register_parameter("bias", bias, false);
    // out_features is a scripted constant; forward reads only weight and bias.

    for (const auto &p : module_.named_parameters(true))
    {
      p.value.requires_grad_(true);
      p.value.mutable_grad() = torch::zeros_like(p.value);
    }
    module_.train(false);
  }

  const ModelSpec &spec() const noexcept override { return spec_; }

  void Backward(const nn::Tensor<float> &grad_logits) override
  {
    if (!training_ || !last_output_.defined())
    {
      throw Error("Backward requires a preceding training-mode Forward");
    }
    auto grad = torch::from_blob(const_cast<float *>(grad_logits.data()), last_output_.sizes(), torch::kFloat32);
    last_output_.backward(grad.clone());
    last_output_ = torch::Tensor();
  }

  std::vector<ParamView<float>> Parameters() override
  {
    std::vector<ParamView<float>> out;
    for (const auto &p : module_.named_parameters(true))
    {
      auto value = p.value;
      auto &grad = value.mutable_grad();
      if (!grad.defined())
      {
        grad = torch::zeros_like(value);
      }
      nn::Shape shape(value.sizes().begin(), value.sizes().end());
      const auto n = static_cast<std::size_t>(value.numel());
      out.push_back({p.name, shape, {value.data_ptr<float>(), n}, {grad.data_ptr<float>(), n}});
    }
    return out;
  }

  void ZeroGrad() override
  {
    for (const auto &p : module_.named_parameters(true))
    {
      if (p.value.grad().defined())
      {
        p.value.mutable_grad().zero_();
      }
    }
  }

  void SetTraining(bool training) override
  {
    training_ = training;
    module_.train(training);
  }

  bool training() const noexcept override { return training_; }

  std::vector<NamedTensor<float>> State() const override
  {
    std::vector<NamedTensor<float>> out;
    for (const auto &p : module_.named_parameters(true))
    {
      out.push_back(ToNamed(p.name, p.value));
    }
    for (const auto &b : module_.named_buffers(true))
    {
      out.push_back(ToNamed(b.name, b.value));
    }
    return out;
  }

  void LoadState(const std::vector<NamedTensor<float>> &state) override
  {
    std::map<std::string, const NamedTensor<float> *> by_name;
    for (const auto &entry : state)
    {
      by_name[entry.name] = &entry;
    }
    torch::NoGradGuard no_grad;
    auto assign = [&](const std::string &name, torch::Tensor target) {
      auto it = by_name.find(name);
      if (it == by_name.end())
      {
        throw DataError("state is missing tensor '" + name + "'");
      }
      const auto &entry = *it->second;
      if (static_cast<int64_t>(entry.values.size()) != target.numel() ||
          entry.shape != nn::Shape(target.sizes().begin(), target.sizes().end()))
      {
        throw DataError("tensor '" + name + "' has shape " + nn::ToString(entry.shape) + " in the state");
      }
      auto src = torch::from_blob(const_cast<float *>(entry.values.data()), target.sizes(), torch::kFloat32);
      target.copy_(src.to(target.scalar_type()));
      by_name.erase(it);
    };
    for (const auto &p : module_.named_parameters(true))
    {
      assign(p.name, p.value);
    }
    for (const auto &b : module_.named_buffers(true))
    {
      assign(b.name, b.value);
    }
    if (!by_name.empty())
    {
      throw DataError("state has unexpected tensor '" + by_name.begin()->first + "'");
    }
  }

  std::string head_prefix() const override { return HeadFor(spec_.architecture).module_path + "."; }

protected:
  nn::Tensor<float> ForwardImpl(const nn::Tensor<float> &batch) override
  {
    std::vector<int64_t> sizes(batch.shape().begin(), batch.shape().end());
    auto input = torch::from_blob(const_cast<float *>(batch.data()), sizes, torch::kFloat32).clone();
    torch::Tensor logits;
    if (training_)
    {
      logits = module_.forward({input}).toTensor();
      last_output_ = logits;
    }
    else
    {
      torch::NoGradGuard no_grad;
      logits = module_.forward({input}).toTensor();
    }
    const auto flat = logits.detach().contiguous();
    nn::Shape shape(flat.sizes().begin(), flat.sizes().end());
    if (shape.size() != 2 || shape[1] != static_cast<std::size_t>(spec_.num_classes))
    {
      throw DataError("backbone produced logits of shape " + nn::ToString(shape));
    }
    return nn::Tensor<float>(shape, std::vector<float>(flat.data_ptr<float>(), flat.data_ptr<float>() + flat.numel()));
  }

private:
  ModelSpec spec_;
  mutable torch::jit::Module module_;
  torch::Tensor last_output_;
  bool training_ = false;
};

}  // namespace

bool BackbonesSupported() noexcept { return true; }

void SetBackboneDeterminism(bool deterministic)
{
  at::globalContext().setDeterministicAlgorithms(deterministic, false);
}

ArtifactInfo ReadArtifactInfo(const std::filesystem::path &artifact) { return LoadArchive(artifact).info; }

std::vector<NamedTensor<float>> ReadArtifactParameters(const std::filesystem::path &artifact)
{
  auto archive = LoadArchive(artifact);
  std::vector<NamedTensor<float>> out;
  for (const auto &p : archive.module.named_parameters(true))
  {
    out.push_back(ToNamed(p.name, p.value));
  }
  return out;
}

std::unique_ptr<Model<float>> LoadBackbone(const ModelSpec &spec, const std::filesystem::path &artifact,
                                           std::uint64_t seed)
{
  spec.Validate();
  if (!std::filesystem::is_regular_file(artifact))
  {
    throw ArtifactUnavailable(FetchInstructions(spec.architecture, artifact.parent_path()));
  }
  return std::make_unique<TorchBackbone>(spec, LoadArchive(artifact), seed);
}

}  // namespace herbclf::zoo
