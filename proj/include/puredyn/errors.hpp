#pragma once

#include <stdexcept>
#include <string>

namespace puredyn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Odd site counts have no zero-magnetization sector.
class SectorError : public Error {
 public:
  using Error::Error;
};

/// Requested size exceeds what the implementation can hold or solve.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A macrostate or energy window with no states was required.
class EmptySubspaceError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument or violated precondition.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A threshold that must be reached and held was not within the simulated times.
class HorizonError : public Error {
 public:
  using Error::Error;
};

/// Non-finite amplitudes or solver failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration value; key_path names the offending entry.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path + ": " + what), key_path_(std::move(key_path)) {}
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace puredyn
