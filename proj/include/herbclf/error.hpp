// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef HERBCLF_ERROR_HPP
#define HERBCLF_ERROR_HPP

#include <stdexcept>
#include <string>

namespace herbclf
{

// Base for every error the library raises on purpose.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or invocation (exit code 1).
class UsageError : public Error
{
public:
  using Error::Error;
};

// Malformed corpus, split, checkpoint, or missing artifact (exit code 2).
class DataError : public Error
{
public:
  using Error::Error;
};

// A published weight artifact is not present in the weight cache.
class ArtifactUnavailable : public DataError
{
public:
  using DataError::DataError;
};

// Non-finite loss or other numeric failure during a run (exit code 3).
class NumericError : public Error
{
public:
  using Error::Error;
};

namespace exit_code
{
inline constexpr int success = 0;
inline constexpr int usage = 1;
inline constexpr int data = 2;
inline constexpr int runtime = 3;
}  // namespace exit_code

// Maps an exception from a command onto the CLI exit codes.
int ExitCodeFor(const std::exception &e) noexcept;

}  // namespace herbclf

#endif  // HERBCLF_ERROR_HPP
