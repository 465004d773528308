// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/nn/kernels.hpp"

#include <atomic>

namespace herbclf::nn
{

namespace
{
std::atomic<Backend> g_backend{Backend::omp};
}  // namespace

Backend CurrentBackend() noexcept { return g_backend.load(std::memory_order_relaxed); }
void SetBackend(Backend backend) noexcept { g_backend.store(backend, std::memory_order_relaxed); }

namespace kernels
{

#define HERBCLF_DISPATCH(name, ...)              \
  if (CurrentBackend() == Backend::serial)       \
  {                                              \
    serial::name(__VA_ARGS__);                   \
  }                                              \
  else                                           \
  {                                              \
    omp::name(__VA_ARGS__);                      \
  }

template <typename T>
void Conv2dForward(const ConvShape &s, const T *x, const T *w, const T *b, T *y)
{
  HERBCLF_DISPATCH(Conv2dForward, s, x, w, b, y)
}

template <typename T>
void Conv2dBackward(const ConvShape &s, const T *x, const T *w, const T *dy, T *dx, T *dw, T *db)
{
  HERBCLF_DISPATCH(Conv2dBackward, s, x, w, dy, dx, dw, db)
}

template <typename T>
void MaxPoolForward(const PoolShape &s, const T *x, T *y, std::uint32_t *argmax)
{
  HERBCLF_DISPATCH(MaxPoolForward, s, x, y, argmax)
}

template <typename T>
void MaxPoolBackward(const PoolShape &s, const T *dy, const std::uint32_t *argmax, T *dx)
{
  HERBCLF_DISPATCH(MaxPoolBackward, s, dy, argmax, dx)
}

template <typename T>
void LinearForward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *b, T *y)
{
  HERBCLF_DISPATCH(LinearForward, rows, in, out, x, w, b, y)
}

template <typename T>
void LinearBackward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *dy, T *dx,
                    T *dw, T *db)
{
  HERBCLF_DISPATCH(LinearBackward, rows, in, out, x, w, dy, dx, dw, db)
}

template <typename T>
void ReluForward(std::size_t n, const T *x, T *y)
{
  HERBCLF_DISPATCH(ReluForward, n, x, y)
}

template <typename T>
void ReluBackward(std::size_t n, const T *x, const T *dy, T *dx)
{
  HERBCLF_DISPATCH(ReluBackward, n, x, dy, dx)
}

template <typename T>
void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const T *a, const T *b, T *c,
          bool accumulate)
{
  HERBCLF_DISPATCH(Gemm, trans_a, trans_b, m, n, k, a, b, c, accumulate)
}

template <typename T>
void AdamStep(std::size_t n, T *param, const T *grad, T *m, T *v, const AdamStepArgs &args)
{
  HERBCLF_DISPATCH(AdamStep, n, param, grad, m, v, args)
}

#undef HERBCLF_DISPATCH

#define HERBCLF_INSTANTIATE(T)                                                                                  \
  template void Conv2dForward<T>(const ConvShape &, const T *, const T *, const T *, T *);                     \
  template void Conv2dBackward<T>(const ConvShape &, const T *, const T *, const T *, T *, T *, T *);          \
  template void MaxPoolForward<T>(const PoolShape &, const T *, T *, std::uint32_t *);                        \
  template void MaxPoolBackward<T>(const PoolShape &, const T *, const std::uint32_t *, T *);                 \
  template void LinearForward<T>(std::size_t, std::size_t, std::size_t, const T *, const T *, const T *, T *); \
  template void LinearBackward<T>(std::size_t, std::size_t, std::size_t, const T *, const T *, const T *, T *, \
                                  T *, T *);                                                                   \
  template void ReluForward<T>(std::size_t, const T *, T *);                                                   \
  template void ReluBackward<T>(std::size_t, const T *, const T *, T *);                                       \
  template void Gemm<T>(bool, bool, std::size_t, std::size_t, std::size_t, const T *, const T *, T *, bool);   \
  template void AdamStep<T>(std::size_t, T *, const T *, T *, T *, const AdamStepArgs &);

HERBCLF_INSTANTIATE(float)
HERBCLF_INSTANTIATE(double)

#undef HERBCLF_INSTANTIATE

}  // namespace kernels
}  // namespace herbclf::nn
