#pragma once

#include <stdexcept>
#include <string>

namespace mrfm {

/// Bad or inconsistent configuration (missing keys, typos, invariant violations).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Probability reached the outer band of the position or momentum grid.
class EdgeLeakError : public std::runtime_error {
 public:
  EdgeLeakError(const std::string& what, double tau, double leaked)
      : std::runtime_error(what), tau_(tau), leaked_(leaked) {}
  double tau() const noexcept { return tau_; }
  double leaked_probability() const noexcept { return leaked_; }

 private:
  double tau_;
  double leaked_;
};

/// The field picked up NaN or Inf values.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const noexcept { return tau_; }

 private:
  double tau_;
};

/// An exported file could not be read back.
class MalformedFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mrfm
