#pragma once

#include <stdexcept>
#include <string>

namespace dinv {

// Base of every exception thrown by the core library. The C API maps each
// subclass onto one dinv_status code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain (t <= 0, u outside [0,1], ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// A user-supplied function produced NaN or an otherwise unusable value.
class EvaluationError : public Error {
public:
  using Error::Error;
};

// A function assumed increasing turned out not to be.
class InconsistencyError : public Error {
public:
  using Error::Error;
};

// The process is not d-increasing, so no d-inverse exists.
class NotDIncreasingError : public Error {
public:
  using Error::Error;
};

// Scaling-limit classification could not settle on one of the four cases.
class ClassificationError : public Error {
public:
  ClassificationError(const std::string& what, std::string profile_json = {})
      : Error(what), profile_(std::move(profile_json)) {}
  const std::string& profile() const noexcept { return profile_; }

private:
  std::string profile_;
};

// Time change a(t) = int sigma^2 is not strictly increasing.
class DegenerateTimeChangeError : public Error {
public:
  using Error::Error;
};

// File could not be read or parsed.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace dinv
