#pragma once

#include <stdexcept>
#include <string>

namespace screening {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates its owning type's invariants. The message names the field.
class InvalidArgument : public Error {
 public:
  InvalidArgument(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The conditioning event of a posterior has probability zero.
class UndefinedPosterior : public Error {
 public:
  using Error::Error;
};

/// A target PPV cannot be attained at any strictly positive prior minimum.
class Unreachable : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class DegenerateTraining : public Error {
 public:
  using Error::Error;
};

class EmptyAnswer : public Error {
 public:
  using Error::Error;
};

class AllUndecided : public Error {
 public:
  using Error::Error;
};

class InsufficientParticipants : public Error {
 public:
  using Error::Error;
};

class InsufficientGroups : public Error {
 public:
  using Error::Error;
};

}  // namespace screening
