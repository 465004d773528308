// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/zoo/model.hpp"

#include <cmath>
#include <string>

#include "herbclf/error.hpp"

namespace herbclf::zoo
{

template <typename T>
nn::Tensor<T> Model<T>::Forward(const nn::Tensor<T> &batch)
{
  const auto r = static_cast<std::size_t>(spec().input_resolution);
  const auto &s = batch.shape();
  if (s.size() != 4 || s[0] == 0 || s[1] != 3 || s[2] != r || s[3] != r)
  {
    throw DataError(std::string(ToString(spec().architecture)) + " expects input (B, 3, " + std::to_string(r) + ", " +
                    std::to_string(r) + "), got " + nn::ToString(s));
  }
  auto logits = ForwardImpl(batch);
  for (T v : logits.values())
  {
    if (!std::isfinite(v))
    {
      throw NumericError("non-finite logit produced by " + std::string(ToString(spec().architecture)));
    }
  }
  return logits;
}

template <typename T>
std::size_t ParameterCount(Model<T> &model)
{
  std::size_t total = 0;
  for (const auto &p : model.Parameters())
  {
    total += p.value.size();
  }
  return total;
}

template class Model<float>;
template class Model<double>;
template std::size_t ParameterCount(Model<float> &);
template std::size_t ParameterCount(Model<double> &);

}  // namespace herbclf::zoo
