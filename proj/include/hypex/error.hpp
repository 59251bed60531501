#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace hypex {

/// Base for every error raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its precondition.
class param_error : public error {
public:
  using error::error;
};

/// Malformed input text or JSON. The message names the offending line.
class parse_error : public error {
public:
  using error::error;
};

/// A host hypergraph does not have the structure an operation requires
/// (for example a non-transversal edge under a given partition).
class structure_error : public error {
public:
  using error::error;
};

/// An exact search ran out of its node budget. Carries the best object
/// found so far, when there is one.
class budget_error : public error {
public:
  explicit budget_error(const std::string &what, nlohmann::json best_known = nullptr)
      : error(what), best_known_(std::move(best_known)) {}

  const nlohmann::json &best_known() const noexcept { return best_known_; }

private:
  nlohmann::json best_known_;
};

/// An internal law was violated (a monotone sequence increased, a
/// postcondition failed). Always a bug or a counterexample worth keeping.
class invariant_error : public error {
public:
  using error::error;
};

/// An input was rejected because a checker produced a certificate against it.
class certificate_error : public error {
public:
  certificate_error(const std::string &what, nlohmann::json certificate)
      : error(what), certificate_(std::move(certificate)) {}

  const nlohmann::json &certificate() const noexcept { return certificate_; }

private:
  nlohmann::json certificate_;
};

} // namespace hypex
