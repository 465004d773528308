// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/error.hpp"

namespace herbclf
{

int ExitCodeFor(const std::exception &e) noexcept
{
  if (dynamic_cast<const UsageError *>(&e))
  {
    return exit_code::usage;
  }
  if (dynamic_cast<const DataError *>(&e))
  {
    return exit_code::data;
  }
  return exit_code::runtime;
}

}  // namespace herbclf
