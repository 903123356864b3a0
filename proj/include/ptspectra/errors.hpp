#pragma once

#include <stdexcept>
#include <string>

namespace ptspectra {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy sits on (or within 1e-12 of) a branch point of p, q or r.
class DegenerateEnergy : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// A parameter sweep shows no real -> complex transition to refine.
class BadBracket : public Error {
 public:
  using Error::Error;
};

class LostBranch : public Error {
 public:
  using Error::Error;
};

class AmbiguousTransition : public Error {
 public:
  using Error::Error;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

/// The potential is unbounded below at the truncation boundary.
class UnboundedBelow : public Error {
 public:
  using Error::Error;
};

class BadGeometry : public Error {
 public:
  using Error::Error;
};

/// Invalid or unsupported configuration (schema violations, unknown fields).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptspectra
