#include "surftopo/errors.hpp"

#include <utility>

namespace surftopo {

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::invalid_argument(path.empty() ? message : path + ": " + message),
      path_(std::move(path)),
      message_(message) {}

}  // namespace surftopo
