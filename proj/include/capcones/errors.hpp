#pragma once

#include <stdexcept>
#include <string>

namespace capcones {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NonAdmissible : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonIntegralDimension : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PoleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ComplexExponents : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WrongG : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Unsupported : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoBracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSignChange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonMonotone : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BlowupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotOtFkm : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MissingOtFkmParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace capcones
