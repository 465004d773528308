// Copyright 2026 The herbclf Authors
// SPDX-License-Identifier: Apache-2.0

#include "herbclf/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <iterator>
#include <memory>

#include "herbclf/error.hpp"

namespace herbclf
{

namespace
{

std::string ToHex(std::span<const unsigned char> digest)
{
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest.size() * 2);
  for (unsigned char b : digest)
  {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

class Sha1
{
public:
  Sha1() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free)
  {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha1(), nullptr) != 1)
    {
      throw Error("SHA-1 initialisation failed");
    }
  }

  void Update(const void *data, std::size_t size)
  {
    if (size > 0 && EVP_DigestUpdate(ctx_.get(), data, size) != 1)
    {
      throw Error("SHA-1 update failed");
    }
  }

  std::string HexDigest()
  {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_DigestFinal_ex(ctx_.get(), digest.data(), &length) != 1)
    {
      throw Error("SHA-1 finalisation failed");
    }
    return ToHex(std::span(digest.data(), length));
  }

private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace

std::uint64_t Fnv1a64(std::span<const std::uint8_t> bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes)
  {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Fnv1a64(std::string_view text)
{
  return Fnv1a64(std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

std::string Sha1Hex(std::span<const std::uint8_t> bytes)
{
  Sha1 sha;
  sha.Update(bytes.data(), bytes.size());
  return sha.HexDigest();
}

std::string Sha1Hex(std::string_view text)
{
  Sha1 sha;
  sha.Update(text.data(), text.size());
  return sha.HexDigest();
}

std::string GitBlobHash(std::span<const std::uint8_t> bytes)
{
  const std::string header = "blob " + std::to_string(bytes.size());
  Sha1 sha;
  sha.Update(header.data(), header.size() + 1);  // includes the terminating NUL
  sha.Update(bytes.data(), bytes.size());
  return sha.HexDigest();
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw DataError("cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace herbclf
