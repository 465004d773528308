// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_NN_TENSOR_HPP
#define HERBCLF_NN_TENSOR_HPP

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "herbclf/error.hpp"

namespace herbclf::nn
{

using Shape = std::vector<std::size_t>;

inline std::size_t NumElements(const Shape &shape)
{
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string ToString(const Shape &shape)
{
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i)
  {
    out += (i ? ", " : "") + std::to_string(shape[i]);
  }
  return out + ")";
}

// Dense row-major tensor that owns its storage. Images are NCHW.
template <typename T>
class Tensor
{
public:
  using value_type = T;

  Tensor() = default;
  explicit Tensor(Shape shape, T fill = T{}) : shape_(std::move(shape)), data_(NumElements(shape_), fill) {}
  Tensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data))
  {
    if (data_.size() != NumElements(shape_))
    {
      throw Error("tensor data size " + std::to_string(data_.size()) + " does not match shape " + ToString(shape_));
    }
  }

  const Shape &shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_.at(i); }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T *data() noexcept { return data_.data(); }
  const T *data() const noexcept { return data_.data(); }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  T &operator[](std::size_t i) { return data_[i]; }
  const T &operator[](std::size_t i) const { return data_[i]; }

  void Reshape(Shape shape)
  {
    if (NumElements(shape) != data_.size())
    {
      throw Error("cannot reshape " + ToString(shape_) + " to " + ToString(shape));
    }
    shape_ = std::move(shape);
  }

  void Fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  friend bool operator==(const Tensor &, const Tensor &) = default;

private:
  Shape shape_;
  std::vector<T> data_;
};

}  // namespace herbclf::nn

#endif  // HERBCLF_NN_TENSOR_HPP
