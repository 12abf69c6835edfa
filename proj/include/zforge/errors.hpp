#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace zforge {

// Base of every error thrown by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotPrime : public Error {
 public:
  explicit NotPrime(std::uint64_t value)
      : Error("not a prime: " + std::to_string(value)), value_(value) {}
  std::uint64_t value() const { return value_; }

 private:
  std::uint64_t value_;
};

class NoIrreducibleFound : public Error {
 public:
  using Error::Error;
};

class SpecMismatch : public Error {
 public:
  SpecMismatch() : Error("operands belong to different fields") {}
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("inverse of zero") {}
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t requested, std::uint64_t budget)
      : Error(what + ": requested " + std::to_string(requested) + " exceeds budget " +
              std::to_string(budget)),
        requested_(requested),
        budget_(budget) {}
  std::uint64_t requested() const { return requested_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t requested_;
  std::uint64_t budget_;
};

class ArityMismatch : public Error {
 public:
  ArityMismatch(std::size_t expected, std::size_t got)
      : Error("expected " + std::to_string(expected) + " coordinates, got " + std::to_string(got)) {}
};

class IncompatibleField : public Error {
 public:
  using Error::Error;
};

class DuplicatePoints : public Error {
 public:
  DuplicatePoints() : Error("point set contains duplicate points") {}
};

class EllTooSmall : public Error {
 public:
  EllTooSmall() : Error("q too small for these s, t: ell < 1") {}
};

class VariantMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

class ConstructionFailed : public Error {
 public:
  // retries_used holds the rejection counts of the indices accepted before
  // the failing one.
  ConstructionFailed(std::size_t index, std::size_t attempts, std::vector<std::size_t> retries_used)
      : Error("construction failed at index " + std::to_string(index) + " after " +
              std::to_string(attempts) + " attempts"),
        index_(index),
        attempts_(attempts),
        retries_used_(std::move(retries_used)) {}
  std::size_t index() const { return index_; }
  std::size_t attempts() const { return attempts_; }
  const std::vector<std::size_t>& retries_used() const { return retries_used_; }

 private:
  std::size_t index_;
  std::size_t attempts_;
  std::vector<std::size_t> retries_used_;
};

}  // namespace zforge
