#pragma once

#include <stdexcept>
#include <string>

namespace fastfix {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tensor shape contract violated. `where` names the offending layer or op.
class ShapeError : public Error {
 public:
  ShapeError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

class DataError : public Error {
 public:
  using Error::Error;
};

/// Configuration problem; `key_path` is the dotted path of the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& what)
      : Error(key_path.empty() ? what : key_path + ": " + what),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

}  // namespace fastfix
