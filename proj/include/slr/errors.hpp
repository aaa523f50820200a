#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "slr/index.hpp"

namespace slr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid grid dimensions, arity mismatches, out-of-range centers.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Rejected pattern or application parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An elemental function threw while computing one output element.
///
/// `index` is the global index of the element. When the failure happened
/// inside a partition worker, `partition` and `local_index` identify the
/// worker and the position relative to its first owned row.
class KernelError : public Error {
 public:
  KernelError(Index index, const std::string& what)
      : Error(describe(index, std::nullopt, index, what)),
        index_(index),
        local_(index),
        cause_(what) {}

  KernelError(Index index, std::size_t partition, Index local, const std::string& what)
      : Error(describe(index, partition, local, what)),
        index_(index),
        partition_(partition),
        local_(local),
        cause_(what) {}

  Index index() const noexcept { return index_; }
  std::optional<std::size_t> partition() const noexcept { return partition_; }
  Index local_index() const noexcept { return local_; }
  /// Message of the original exception thrown by the elemental function.
  const std::string& cause() const noexcept { return cause_; }

 private:
  static std::string describe(Index index, std::optional<std::size_t> partition, Index local,
                              const std::string& what) {
    std::string msg = "elemental function failed at (" + std::to_string(index.row) + "," +
                      std::to_string(index.col) + ")";
    if (partition) {
      msg += " in partition " + std::to_string(*partition) + " at local (" +
             std::to_string(local.row) + "," + std::to_string(local.col) + ")";
    }
    return msg + ": " + what;
  }

  Index index_;
  std::optional<std::size_t> partition_;
  Index local_;
  std::string cause_;
};

/// Malformed input file; `offset` is the byte position where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), message_(what), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }
  /// Description without the offset suffix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string message_;
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace slr
