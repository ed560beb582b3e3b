#pragma once

#include <stdexcept>
#include <string>

namespace qns {

/// Invalid configuration or flag combination (counts, boundary kinds, HHL constants).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Caller broke a documented precondition (non-unitary gate, asymmetric matrix, ...).
class ContractViolation : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

/// Singular system whose right-hand side is not in the range of the matrix.
class ConsistencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DegenerateInputError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class PostSelectionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class IllConditionedError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ScopeError : public std::length_error {
  public:
    using std::length_error::length_error;
};

class InstabilityError : public std::runtime_error {
  public:
    InstabilityError(const std::string &what, int step)
        : std::runtime_error(what), step_(step) {}
    [[nodiscard]] int step() const noexcept { return step_; }

  private:
    int step_;
};

} // namespace qns
