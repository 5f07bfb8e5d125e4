#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tensorlab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

class CarrierTooLarge : public Error {
 public:
  using Error::Error;
};

class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

class FactorMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidRule : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class RuleSetNotNested : public Error {
 public:
  using Error::Error;
};

class NotAHomomorphism : public Error {
 public:
  using Error::Error;
};

class NotAssociative : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// Caps or experiment parameters outside their admissible range.
class InvalidCap : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::uint64_t required, std::uint64_t budget)
      : Error("word universe of " + std::to_string(required)
              + " words exceeds budget " + std::to_string(budget)),
        required_(required),
        budget_(budget) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

/// A map that should be constant on a class is not: two members of the same
/// class produce different values.
class WellDefinednessViolation : public Error {
 public:
  WellDefinednessViolation(std::string what, std::size_t class_id,
                           std::string first_member, std::string second_member)
      : Error(std::move(what)),
        class_id_(class_id),
        first_(std::move(first_member)),
        second_(std::move(second_member)) {}

  std::size_t class_id() const noexcept { return class_id_; }
  std::string const& first_member() const noexcept { return first_; }
  std::string const& second_member() const noexcept { return second_; }

 private:
  std::size_t class_id_;
  std::string first_;
  std::string second_;
};

}  // namespace tensorlab
