// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_PARALLEL_HPP
#define HERBCLF_PARALLEL_HPP

#include <cstddef>
#include <exception>

#include <omp.h>

namespace herbclf
{

// Runs body(i) for i in [0, n) across OpenMP threads, dynamically scheduled.
// The first exception thrown by any iteration is rethrown on the caller's
// thread once the loop has drained.
template <typename Body>
void ParallelFor(std::ptrdiff_t n, Body &&body)
{
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i)
  {
    try
    {
      body(i);
    }
    catch (...)
    {
#pragma omp critical(herbclf_parallel_for_error)
      {
        if (!error)
        {
          error = std::current_exception();
        }
      }
    }
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

int MaxThreads();

}  // namespace herbclf

#endif  // HERBCLF_PARALLEL_HPP
