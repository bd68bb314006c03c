#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bpxor {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration guard (pattern count, search space, 2^k) would be exceeded.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

class UnderdeterminedError : public Error {
 public:
  explicit UnderdeterminedError(std::size_t rank)
      : Error("underdetermined system: rank " + std::to_string(rank)), rank_(rank) {}
  std::size_t rank() const noexcept { return rank_; }

 private:
  std::size_t rank_;
};

// Shards or descriptors that cannot be decoded into the original content.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Malformed descriptor or shard bytes.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace bpxor
