// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/parallel.hpp"

namespace herbclf
{

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace herbclf
