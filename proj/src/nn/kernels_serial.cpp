// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

// Reference kernels: one loop nest per definition, no blocking, no threads.

#include <cmath>
#include <limits>

#include "herbclf/nn/kernels.hpp"

namespace herbclf::nn::kernels::serial
{

template <typename T>
void Conv2dForward(const ConvShape &s, const T *x, const T *w, const T *b, T *y)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  for (std::size_t n = 0; n < s.batch; ++n)
  {
    for (std::size_t o = 0; o < s.out_channels; ++o)
    {
      for (std::size_t i = 0; i < oh; ++i)
      {
        for (std::size_t j = 0; j < ow; ++j)
        {
          T acc = b ? b[o] : T{0};
          for (std::size_t c = 0; c < s.in_channels; ++c)
          {
            for (std::size_t ki = 0; ki < s.kernel; ++ki)
            {
              for (std::size_t kj = 0; kj < s.kernel; ++kj)
              {
                const auto yi = static_cast<std::ptrdiff_t>(i * s.stride + ki) - static_cast<std::ptrdiff_t>(s.padding);
                const auto xj = static_cast<std::ptrdiff_t>(j * s.stride + kj) - static_cast<std::ptrdiff_t>(s.padding);
                if (yi < 0 || xj < 0 || yi >= static_cast<std::ptrdiff_t>(s.height) ||
                    xj >= static_cast<std::ptrdiff_t>(s.width))
                {
                  continue;
                }
                acc += w[((o * s.in_channels + c) * s.kernel + ki) * s.kernel + kj] *
                       x[((n * s.in_channels + c) * s.height + yi) * s.width + xj];
              }
            }
          }
          y[((n * s.out_channels + o) * oh + i) * ow + j] = acc;
        }
      }
    }
  }
}

template <typename T>
void Conv2dBackward(const ConvShape &s, const T *x, const T *w, const T *dy, T *dx, T *dw, T *db)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  if (dx)
  {
    for (std::size_t i = 0; i < s.batch * s.in_channels * s.height * s.width; ++i)
    {
      dx[i] = T{0};
    }
  }
  for (std::size_t n = 0; n < s.batch; ++n)
  {
    for (std::size_t o = 0; o < s.out_channels; ++o)
    {
      for (std::size_t i = 0; i < oh; ++i)
      {
        for (std::size_t j = 0; j < ow; ++j)
        {
          const T g = dy[((n * s.out_channels + o) * oh + i) * ow + j];
          if (db)
          {
            db[o] += g;
          }
          for (std::size_t c = 0; c < s.in_channels; ++c)
          {
            for (std::size_t ki = 0; ki < s.kernel; ++ki)
            {
              for (std::size_t kj = 0; kj < s.kernel; ++kj)
              {
                const auto yi = static_cast<std::ptrdiff_t>(i * s.stride + ki) - static_cast<std::ptrdiff_t>(s.padding);
                const auto xj = static_cast<std::ptrdiff_t>(j * s.stride + kj) - static_cast<std::ptrdiff_t>(s.padding);
                if (yi < 0 || xj < 0 || yi >= static_cast<std::ptrdiff_t>(s.height) ||
                    xj >= static_cast<std::ptrdiff_t>(s.width))
                {
                  continue;
                }
                const std::size_t wi = ((o * s.in_channels + c) * s.kernel + ki) * s.kernel + kj;
                const std::size_t xi = ((n * s.in_channels + c) * s.height + yi) * s.width + xj;
                dw[wi] += g * x[xi];
                if (dx)
                {
                  dx[xi] += g * w[wi];
                }
              }
            }
          }
        }
      }
    }
  }
}

template <typename T>
void MaxPoolForward(const PoolShape &s, const T *x, T *y, std::uint32_t *argmax)
{
  const std::size_t oh = s.out_height(), ow = s.out_width();
  for (std::size_t p = 0; p < s.batch * s.channels; ++p)
  {
    const T *plane = x + p * s.height * s.width;
    for (std::size_t i = 0; i < oh; ++i)
    {
      for (std::size_t j = 0; j < ow; ++j)
      {
        T best = -std::numeric_limits<T>::infinity();
        std::uint32_t best_at = 0;
        for (std::size_t di = 0; di < s.window; ++di)
        {
          for (std::size_t dj = 0; dj < s.window; ++dj)
          {
            const std::size_t at = (i * s.window + di) * s.width + j * s.window + dj;
            if (plane[at] > best || (di == 0 && dj == 0))
            {
              best = plane[at];
              best_at = static_cast<std::uint32_t>(at);
            }
          }
        }
        y[(p * oh + i) * ow + j] = best;
        if (argmax)
        {
          argmax[(p * oh + i) * ow + j] = best_at;
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
  for (std::size_t i = 0; i < s.batch * s.channels * plane_in; ++i)
  {
    dx[i] = T{0};
  }
  for (std::size_t p = 0; p < s.batch * s.channels; ++p)
  {
    for (std::size_t k = 0; k < plane_out; ++k)
    {
      dx[p * plane_in + argmax[p * plane_out + k]] += dy[p * plane_out + k];
    }
  }
}

template <typename T>
void LinearForward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *b, T *y)
{
  for (std::size_t r = 0; r < rows; ++r)
  {
    for (std::size_t o = 0; o < out; ++o)
    {
      T acc = b ? b[o] : T{0};
      for (std::size_t i = 0; i < in; ++i)
      {
        acc += x[r * in + i] * w[o * in + i];
      }
      y[r * out + o] = acc;
    }
  }
}

template <typename T>
void LinearBackward(std::size_t rows, std::size_t in, std::size_t out, const T *x, const T *w, const T *dy, T *dx,
                    T *dw, T *db)
{
  for (std::size_t r = 0; r < rows; ++r)
  {
    for (std::size_t i = 0; dx && i < in; ++i)
    {
      T acc{0};
      for (std::size_t o = 0; o < out; ++o)
      {
        acc += dy[r * out + o] * w[o * in + i];
      }
      dx[r * in + i] = acc;
    }
    for (std::size_t o = 0; o < out; ++o)
    {
      const T g = dy[r * out + o];
      if (db)
      {
        db[o] += g;
      }
      for (std::size_t i = 0; i < in; ++i)
      {
        dw[o * in + i] += g * x[r * in + i];
      }
    }
  }
}

template <typename T>
void ReluForward(std::size_t n, const T *x, T *y)
{
  for (std::size_t i = 0; i < n; ++i)
  {
    y[i] = x[i] > T{0} ? x[i] : T{0};
  }
}

template <typename T>
void ReluBackward(std::size_t n, const T *x, const T *dy, T *dx)
{
  for (std::size_t i = 0; i < n; ++i)
  {
    dx[i] = x[i] > T{0} ? dy[i] : T{0};
  }
}

template <typename T>
void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, const T *a, const T *b, T *c,
          bool accumulate)
{
  for (std::size_t i = 0; i < m; ++i)
  {
    for (std::size_t j = 0; j < n; ++j)
    {
      T acc{0};
      for (std::size_t p = 0; p < k; ++p)
      {
        const T av = trans_a ? a[p * m + i] : a[i * k + p];
        const T bv = trans_b ? b[j * k + p] : b[p * n + j];
        acc += av * bv;
      }
      c[i * n + j] = accumulate ? c[i * n + j] + acc : acc;
    }
  }
}

template <typename T>
void AdamStep(std::size_t n, T *param, const T *grad, T *m, T *v, const AdamStepArgs &args)
{
  const double c1 = 1.0 - std::pow(args.beta1, static_cast<double>(args.step));
  const double c2 = 1.0 - std::pow(args.beta2, static_cast<double>(args.step));
  for (std::size_t i = 0; i < n; ++i)
  {
    const double g = grad[i];
    const double mi = args.beta1 * m[i] + (1.0 - args.beta1) * g;
    const double vi = args.beta2 * v[i] + (1.0 - args.beta2) * g * g;
    m[i] = static_cast<T>(mi);
    v[i] = static_cast<T>(vi);
    const double m_hat = mi / c1;
    const double v_hat = vi / c2;
    param[i] = static_cast<T>(param[i] - args.lr * m_hat / (std::sqrt(v_hat) + args.epsilon));
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

}  // namespace herbclf::nn::kernels::serial
