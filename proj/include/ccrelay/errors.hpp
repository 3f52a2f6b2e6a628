#pragma once

#include <stdexcept>
#include <string>

namespace ccrelay {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (e.g. l not in T).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// SystemParams or SimConfig invariant violated.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Channel vectors are not in generic position, or a zero-forcing
/// null space does not have dimension one.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A user was asked for a subpacket it does not cache. Indicates a
/// construction bug in the scheme, never a runtime condition.
class PlacementConsistencyError : public Error {
 public:
  using Error::Error;
};

/// DL coefficient codebook could not be made well conditioned.
class CodebookError : public Error {
 public:
  using Error::Error;
};

/// A DL transmission was requested before all codewords of the stage exist.
class StageIncompleteError : public Error {
 public:
  using Error::Error;
};

/// The effective DL gain of a subpacket is too small to equalize.
class UnequalizableError : public Error {
 public:
  using Error::Error;
};

/// Decoded plus cached subpackets do not cover the requested file.
class IncompleteRecoveryError : public Error {
 public:
  using Error::Error;
};

}  // namespace ccrelay
