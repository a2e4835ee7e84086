#pragma once

#include <stdexcept>
#include <string>

namespace rikitake {

/// Caller broke an operation's precondition (dimension mismatch, bad config).
class ContractError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A field was evaluated outside its smooth real domain.
class DomainError : public std::domain_error {
public:
  DomainError(std::string field, const std::string& what)
      : std::domain_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

/// Invalid catalog parameter (e.g. lambda = 1/2 where 8*lambda - 4 divides).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace rikitake
