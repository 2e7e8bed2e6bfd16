#pragma once

#include <stdexcept>
#include <string>

namespace ldg {

// Thrown for malformed meshes, shapes, indices and unknown identifiers.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigendecomposition failures: complex spectrum or missing eigenvectors.
class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Singular circulant / projection systems.
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A non-finite state was produced during time integration.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double t, double max_norm)
      : std::runtime_error(what), time_(t), max_norm_(max_norm) {}
  double time() const { return time_; }
  double max_norm() const { return max_norm_; }

 private:
  double time_;
  double max_norm_;
};

// Configuration parse / validation failures; line is 0 when not tied to one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace ldg
