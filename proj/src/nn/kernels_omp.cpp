// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// OpenMP kernels. Every output element is produced by exactly one thread
// with a fixed summation order, so results do not depend on the thread
// count.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

#include "herbclf/nn/kernels.hpp"

namespace herbclf::nn::kernels::omp
{

namespace
{

constexpr std::size_t kMr = 8;       // rows per register tile
constexpr std::size_t kKc = 256;     // depth of one packed block
template <typename T>
constexpr std::size_t kNr = 128 / sizeof(T);  // two 512-bit lanes of columns

// Panels of kMr rows of op(A), each stored k-major: panel[p * kMr + r].
template <typename T>
void PackA(bool trans, std::size_t m, std::size_t k, const T *a, T *dst)
{
  const std::size_t panels = (m + kMr - 1) / kMr;
  for (std::size_t ip = 0; ip < panels; ++ip)
  {
    T *panel = dst + ip * k * kMr;
    const std::size_t r0 = ip * kMr;
    const std::size_t rows = std::min(kMr, m - r0);
    for (std::size_t p = 0; p < k; ++p)
    {
      for (std::size_t r = 0; r < kMr; ++r)
      {
        T v{0};
        if (r < rows)
        {
          v = trans ? a[p * m + r0 + r] : a[(r0 + r) * k + p];
        }
        panel[p * kMr + r] = v;
      }
    }
  }
}

// Panels of kNr columns of op(B), each stored k-major: panel[p * kNr + j].
template <typename T>
void PackB(bool trans, std::size_t k, std::size_t n, const T *b, T *dst)
{
  constexpr std::size_t nr = kNr<T>;
  const std::size_t panels = (n + nr - 1) / nr;
  for (std::size_t jp = 0; jp < panels; ++jp)
  {
    T *panel = dst + jp * k * nr;
    const std::size_t c0 = jp * nr;
    const std::size_t cols = std::min(nr, n - c0);
    if (!trans)
    {
      for (std::size_t p = 0; p < k; ++p)
      {
        const T *src = b + p * n + c0;
        T *out = panel + p * nr;
        std::size_t j = 0;
        for (; j < cols; ++j)
        {
          out[j] = src[j];
        }
        for (; j < nr; ++j)
        {
          out[j] = T{0};
        }
      }
    }
    else
    {
      // Reads cols sequential streams, writes the panel in order.
      for (std::size_t p = 0; p < k; ++p)
      {
        T *out = panel + p * nr;
        std::size_t j = 0;
        for (; j < cols; ++j)
        {
          out[j] = b[(c0 + j) * k + p];
        }
        for (; j < nr; ++j)
        {
          out[j] = T{0};
        }
      }
    }
  }
}

template <typename T>
void MicroKernel(std::size_t kc, const T *__restrict ap, const T *__restrict bp, T *__restrict c, std::size_t ldc,
                 std::size_t rows, std::size_t cols, bool overwrite)
{
  constexpr std::size_t nr = kNr<T>;
  alignas(64) T acc[kMr][nr] = {};
  for (std::size_t p = 0; p < kc; ++p)
  {
    const T *bv = bp + p * nr;
    const T *av = ap + p * kMr;
    for (std::size_t r = 0; r < kMr; ++r)
    {
      const T a = av[r];
#pragma omp simd
      for (std::size_t j = 0; j < nr; ++j)
      {
        acc[r][j] += a * bv[j];
      }
    }
  }
  for (std::size_t r = 0; r < rows; ++r)
  {
    T *row = c + r * ldc;
    if (overwrite)
    {
      for (std::size_t j = 0; j < cols; ++j)
      {
        row[j] = acc[r][j];
      }
    }
    else
    {
      for (std::size_t j = 0; j < cols; ++j)
      {
        row[j] += acc[r][j];
      }
    }
  }
}

template <typename T>
void GemmImpl(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const T *a, const T *b, T *c,
              bool accumulate)
{
  if (m == 0 || n == 0)
  {
    return;
  }
  if (k == 0)
  {
    if (!accumulate)
    {
      std::fill(c, c + m * n, T{0});
    }
    return;
  }
  constexpr std::size_t nr = kNr<T>;
  const std::size_t a_panels = (m + kMr - 1) / kMr;
  const std::size_t b_panels = (n + nr - 1) / nr;
  std::vector<T> packed_a(a_panels * kMr * k);
  std::vector<T> packed_b(b_panels * nr * k);
  PackA(trans_a, m, k, a, packed_a.data());
  PackB(trans_b, k, n, b, packed_b.data());

  const auto tiles = static_cast<std::ptrdiff_t>(a_panels * b_panels);
  const bool top_level = !omp_in_parallel();
  for (std::size_t k0 = 0; k0 < k; k0 += kKc)
  {
    const std::size_t kc = std::min(kKc, k - k0);
    const bool overwrite = k0 == 0 && !accumulate;
#pragma omp parallel for schedule(static) if (top_level && tiles > 1)
    for (std::ptrdiff_t t = 0; t < tiles; ++t)
    {
      const std::size_t ip = static_cast<std::size_t>(t) / b_panels;
      const std::size_t jp = static_cast<std::size_t>(t) % b_panels;
      const std::size_t rows = std::min(kMr, m - ip * kMr);
      const std::size_t cols = std::min(nr, n - jp * nr);
      MicroKernel(kc, packed_a.data() + ip * kMr * k + k0 * kMr, packed_b.data() + jp * nr * k + k0 * nr,
                  c + ip * kMr * n + jp * nr, n, rows, cols, overwrite);
    }
  }
}

template <typename T>
void Im2Col(const ConvShape &s, const T *x, T *col)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  for (std::size_t c = 0; c < s.in_channels; ++c)
  {
    for (std::size_t ki = 0; ki < s.kernel; ++ki)
    {
      for (std::size_t kj = 0; kj < s.kernel; ++kj)
      {
        T *dst = col + ((c * s.kernel + ki) * s.kernel + kj) * oh * ow;
        for (std::size_t i = 0; i < oh; ++i)
        {
          const auto yi = static_cast<std::ptrdiff_t>(i * s.stride + ki) - static_cast<std::ptrdiff_t>(s.padding);
          T *out = dst + i * ow;
          if (yi < 0 || yi >= static_cast<std::ptrdiff_t>(s.height))
          {
            std::fill(out, out + ow, T{0});
            continue;
          }
          const T *src = x + (c * s.height + static_cast<std::size_t>(yi)) * s.width;
          for (std::size_t j = 0; j < ow; ++j)
          {
            const auto xj = static_cast<std::ptrdiff_t>(j * s.stride + kj) - static_cast<std::ptrdiff_t>(s.padding);
            out[j] = (xj < 0 || xj >= static_cast<std::ptrdiff_t>(s.width)) ? T{0} : src[xj];
          }
        }
      }
    }
  }
}

template <typename T>
void Col2Im(const ConvShape &s, const T *col, T *x)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  std::fill(x, x + s.in_channels * s.height * s.width, T{0});
  for (std::size_t c = 0; c < s.in_channels; ++c)
  {
    for (std::size_t ki = 0; ki < s.kernel; ++ki)
    {
      for (std::size_t kj = 0; kj < s.kernel; ++kj)
      {
        const T *src = col + ((c * s.kernel + ki) * s.kernel + kj) * oh * ow;
        for (std::size_t i = 0; i < oh; ++i)
        {
          const auto yi = static_cast<std::ptrdiff_t>(i * s.stride + ki) - static_cast<std::ptrdiff_t>(s.padding);
          if (yi < 0 || yi >= static_cast<std::ptrdiff_t>(s.height))
          {
            continue;
          }
          T *dst = x + (c * s.height + static_cast<std::size_t>(yi)) * s.width;
          for (std::size_t j = 0; j < ow; ++j)
          {
            const auto xj = static_cast<std::ptrdiff_t>(j * s.stride + kj) - static_cast<std::ptrdiff_t>(s.padding);
            if (xj >= 0 && xj < static_cast<std::ptrdiff_t>(s.width))
            {
              dst[xj] += src[i * ow + j];
            }
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const T *a, const T *b, T *c,
          bool accumulate)
{
  GemmImpl(trans_a, trans_b, m, n, k, a, b, c, accumulate);
}

template <typename T>
void Conv2dForward(const ConvShape &s, const T *x, const T *w, const T *b, T *y)
{
  const std::size_t plane_out = s.out_height() * s.out_width();
  const std::size_t in_stride = s.in_channels * s.height * s.width;
  const std::size_t out_stride = s.out_channels * plane_out;
  const auto batch = static_cast<std::ptrdiff_t>(s.batch);
#pragma omp parallel if (batch > 1)
  {
    std::vector<T> col(s.patch_size() * plane_out);
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < batch; ++n)
    {
      Im2Col(s, x + n * in_stride, col.data());
      T *out = y + n * out_stride;
      GemmImpl(false, false, s.out_channels, plane_out, s.patch_size(), w, col.data(), out, false);
      if (b)
      {
        for (std::size_t o = 0; o < s.out_channels; ++o)
        {
          T *plane = out + o * plane_out;
          const T bias = b[o];
#pragma omp simd
          for (std::size_t i = 0; i < plane_out; ++i)
          {
            plane[i] += bias;
          }
        }
      }
    }
  }
}

template <typename T>
void Conv2dBackward(const ConvShape &s, const T *x, const T *w, const T *dy, T *dx, T *dw, T *db)
{
  const std::size_t plane_out = s.out_height() * s.out_width();
  const std::size_t in_stride = s.in_channels * s.height * s.width;
  const std::size_t out_stride = s.out_channels * plane_out;
  const auto batch = static_cast<std::ptrdiff_t>(s.batch);

  if (db)
  {
    const auto channels = static_cast<std::ptrdiff_t>(s.out_channels);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t o = 0; o < channels; ++o)
    {
      T acc{0};
      for (std::ptrdiff_t n = 0; n < batch; ++n)
      {
        const T *plane = dy + n * out_stride + o * plane_out;
        for (std::size_t i = 0; i < plane_out; ++i)
        {
          acc += plane[i];
        }
      }
      db[o] += acc;
    }
  }

  // Weight gradient: sum over the batch in order, parallel inside the GEMM.
  {
    std::vector<T> col(s.patch_size() * plane_out);
    for (std::ptrdiff_t n = 0; n < batch; ++n)
    {
      Im2Col(s, x + n * in_stride, col.data());
      GemmImpl(false, true, s.out_channels, s.patch_size(), plane_out, dy + n * out_stride, col.data(), dw, true);
    }
  }

  if (dx)
  {
#pragma omp parallel if (batch > 1)
    {
      std::vector<T> dcol(s.patch_size() * plane_out);
#pragma omp for schedule(static)
      for (std::ptrdiff_t n = 0; n < batch; ++n)
      {
        GemmImpl(true, false, s.patch_size(), plane_out, s.out_channels, w, dy + n * out_stride, dcol.data(), false);
        Col2Im(s, dcol.data(), dx + n * in_stride);
      }
    }
  }
}

template <typename T>
void MaxPoolForward(const PoolShape &s, const T *x, T *y, std::uint32_t *argmax)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  const auto planes = static_cast<std::ptrdiff_t>(s.batch * s.channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < planes; ++p)
  {
    const T *plane = x + p * s.height * s.width;
    T *out = y + p * oh * ow;
    std::uint32_t *arg = argmax ? argmax + p * oh * ow : nullptr;
    for (std::size_t i = 0; i < oh; ++i)
    {
      for (std::size_t j = 0; j < ow; ++j)
      {
        std::size_t best_at = i * s.window * s.width + j * s.window;
        T best = plane[best_at];
        for (std::size_t di = 0; di < s.window; ++di)
        {
          const std::size_t row = (i * s.window + di) * s.width + j * s.window;
          for (std::size_t dj = 0; dj < s.window; ++dj)
          {
            if (plane[row + dj] > best)
            {
              best = plane[row + dj];
              best_at = row + dj;
            }
          }
        }
        out[i * ow + j] = best;
        if (arg)
        {
          arg[i * ow + j] = static_cast<std::uint32_t>(best_at);
        }
      }
    }
  }
}

template <typename T>
void MaxPoolBackward(const PoolShape &s, const T *dy, const std::uint32_t *argmax, T *dx)
{
  const std::size_t plane_in = s.height * s.width;
  const std::size_t plane_out = s.out_height() * s.out_width();
  const auto planes = static_cast<std::ptrdiff_t>(s.batch * s.channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < planes; ++p)
  {
    T *in = dx + p * plane_in;
    std::fill(in, in + plane_in, T{0});
    for (std::size_t k = 0; k < plane_out; ++k)
    {
      in[argmax[p * plane_out + k]] += dy[p * plane_out + k];
    }
  }
}

template <typename T>
void LinearForward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *b, T *y)
{
  GemmImpl(false, true, rows, out, in, x, w, y, false);
  if (b)
  {
    for (std::size_t r = 0; r < rows; ++r)
    {
#pragma omp simd
      for (std::size_t o = 0; o < out; ++o)
      {
        y[r * out + o] += b[o];
      }
    }
  }
}

template <typename T>
void LinearBackward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *dy, T *dx,
                    T *dw, T *db)
{
  if (dx)
  {
    GemmImpl(false, false, rows, in, out, dy, w, dx, false);
  }
  GemmImpl(true, false, out, in, rows, dy, x, dw, true);
  if (db)
  {
    for (std::size_t o = 0; o < out; ++o)
    {
      T acc{0};
      for (std::size_t r = 0; r < rows; ++r)
      {
        acc += dy[r * out + o];
      }
      db[o] += acc;
    }
  }
}

template <typename T>
void ReluForward(std::size_t n, const T *x, T *y)
{
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
  {
    y[i] = x[i] > T{0} ? x[i] : T{0};
  }
}

template <typename T>
void ReluBackward(std::size_t n, const T *x, const T *dy, T *dx)
{
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
  {
    dx[i] = x[i] > T{0} ? dy[i] : T{0};
  }
}

template <typename T>
void AdamStep(std::size_t n, T *param, const T *grad, T *m, T *v, const AdamStepArgs &args)
{
  const double c1 = 1.0 - std::pow(args.beta1, static_cast<double>(args.step));
  const double c2 = 1.0 - std::pow(args.beta2, static_cast<double>(args.step));
  const auto count = static_cast<std::ptrdiff_t>(n);
  const double b1 = args.beta1, b2 = args.beta2, lr = args.lr, eps = args.epsilon;
#pragma omp parallel for simd schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
  {
    const double g = grad[i];
    const double mi = b1 * m[i] + (1.0 - b1) * g;
    const double vi = b2 * v[i] + (1.0 - b2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    param[i] = static_cast<T>(param[i] - lr * (mi / c1) / (std::sqrt(vi / c2) + eps));
  }
}

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

}  // namespace herbclf::nn::kernels::omp
