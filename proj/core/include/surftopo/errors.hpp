#pragma once

#include <stdexcept>
#include <string>

namespace surftopo {

/// Numeric input outside the domain of a geometric or kinematic relation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A rejected configuration value. `path()` names the offending field,
/// e.g. "process.f_z".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string path, const std::string& message);

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// Grid access outside the allocated height field.
class BoundaryError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Malformed surface file: bad magic, unsupported version, size mismatch.
class SurfaceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure while reading or writing artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace surftopo

namespace surftopo {

/// The optimized and reference kernels disagreed on the same configuration.
class KernelMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace surftopo
