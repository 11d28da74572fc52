#pragma once

#include <stdexcept>
#include <string>

namespace kbp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or unresolvable template, or substitution mismatch.
class TemplateError : public Error {
 public:
  using Error::Error;
};

/// Relation config, run config or registry invariant violations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Unparseable input file. Message carries path and line number when known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A backend was called outside its contract, or answered outside it.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Network-level failure talking to a backend. Retriable.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// Fixture backend has no entry for the requested key (entail, qa).
class FixtureKeyError : public Error {
 public:
  using Error::Error;
};

class RetrievalError : public Error {
 public:
  using Error::Error;
};

/// A cache required in offline mode has not been produced yet.
class MissingCacheError : public Error {
 public:
  using Error::Error;
};

}  // namespace kbp
