// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_NN_KERNELS_HPP
#define HERBCLF_NN_KERNELS_HPP

#include <cstddef>
#include <cstdint>

namespace herbclf::nn
{

// Which kernel family the layers call. The serial family is a direct,
// unoptimised transcription of each definition and exists to check the
// OpenMP family against.
enum class Backend
{
  serial,
  omp
};

Backend CurrentBackend() noexcept;
void SetBackend(Backend backend) noexcept;

class ScopedBackend
{
public:
  explicit ScopedBackend(Backend backend) : previous_(CurrentBackend()) { SetBackend(backend); }
  ~ScopedBackend() { SetBackend(previous_); }
  ScopedBackend(const ScopedBackend &) = delete;
  ScopedBackend &operator=(const ScopedBackend &) = delete;

private:
  Backend previous_;
};

// NCHW convolution with square kernel, OIHW weights.
struct ConvShape
{
  std::size_t batch = 1;
  std::size_t in_channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t out_channels = 1;
  std::size_t kernel = 3;
  std::size_t stride = 1;
  std::size_t padding = 0;

  std::size_t out_height() const noexcept { return (height + 2 * padding - kernel) / stride + 1; }
  std::size_t out_width() const noexcept { return (width + 2 * padding - kernel) / stride + 1; }
  std::size_t patch_size() const noexcept { return in_channels * kernel * kernel; }
};

// Non-overlapping max pooling (window == stride); trailing rows/columns
// that do not fill a window are dropped.
struct PoolShape
{
  std::size_t batch = 1;
  std::size_t channels = 1;
  std::size_t height = 1;
  std::size_t width = 1;
  std::size_t window = 2;

  std::size_t out_height() const noexcept { return height / window; }
  std::size_t out_width() const noexcept { return width / window; }
};

struct AdamStepArgs
{
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::int64_t step = 1;  // 1-based, for bias correction
};

#define HERBCLF_KERNEL_DECLS                                                                             \
  template <typename T>                                                                                  \
  void Conv2dForward(const ConvShape &s, const T *x, const T *w, const T *b, T *y);                      \
  /* dx is overwritten (may be null); dw and db are accumulated into (db may be null). */                \
  template <typename T>                                                                                  \
  void Conv2dBackward(const ConvShape &s, const T *x, const T *w, const T *dy, T *dx, T *dw, T *db);      \
  template <typename T>                                                                                  \
  void MaxPoolForward(const PoolShape &s, const T *x, T *y, std::uint32_t *argmax);                      \
  template <typename T>                                                                                  \
  void MaxPoolBackward(const PoolShape &s, const T *dy, const std::uint32_t *argmax, T *dx);             \
  /* y = x W^T + b with W stored (out x in). */                                                          \
  template <typename T>                                                                                  \
  void LinearForward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w,          \
                     const T *b, T *y);                                                                  \
  template <typename T>                                                                                  \
  void LinearBackward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w,         \
                      const T *dy, T *dx, T *dw, T *db);                                                 \
  template <typename T>                                                                                  \
  void ReluForward(std::size_t n, const T *x, T *y);                                                     \
  template <typename T>                                                                                  \
  void ReluBackward(std::size_t n, const T *x, const T *dy, T *dx);                                      \
  /* C (M x N) = op(A) op(B), op(A) is M x K, op(B) is K x N; accumulate adds into C. */                 \
  template <typename T>                                                                                  \
  void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const T *a,         \
            const T *b, T *c, bool accumulate);                                                          \
  template <typename T>                                                                                  \
  void AdamStep(std::size_t n, T *param, const T *grad, T *m, T *v, const AdamStepArgs &args);

namespace kernels
{
namespace serial
{
HERBCLF_KERNEL_DECLS
}  // namespace serial

namespace omp
{
HERBCLF_KERNEL_DECLS
}  // namespace omp

// Dispatch on CurrentBackend().
HERBCLF_KERNEL_DECLS
}  // namespace kernels

#undef HERBCLF_KERNEL_DECLS

}  // namespace herbclf::nn

#endif  // HERBCLF_NN_KERNELS_HPP
