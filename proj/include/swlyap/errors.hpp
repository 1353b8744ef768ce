#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace swlyap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state holds non-finite data or otherwise cannot be normed.
class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Shapes do not fit: unsorted breakpoints, mismatched domains, wrong space kind.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedOperation : public Error {
 public:
  using Error::Error;
};

/// Signal family too large to enumerate.
class SizeError : public Error {
 public:
  SizeError(const std::string& what, std::uint64_t count)
      : Error(what), count_(count) {}
  std::uint64_t count() const noexcept { return count_; }

 private:
  std::uint64_t count_;
};

/// The tail mode of a signal is not Hurwitz, so the infinite-horizon Gram
/// operator does not exist.
class UnstableTailError : public Error {
 public:
  UnstableTailError(const std::string& what, std::size_t mode)
      : Error(what), mode_(mode) {}
  std::size_t mode() const noexcept { return mode_; }

 private:
  std::size_t mode_;
};

class EstimationError : public Error {
 public:
  using Error::Error;
};

class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

}  // namespace swlyap
