#pragma once

#include <stdexcept>
#include <string>

namespace edgebraid {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates an operation's precondition (shape, hermiticity, range).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class UnsupportedParameter : public Error {
 public:
  using Error::Error;
};

// Fewer or more than two sub-threshold eigenvalues where a topological pair was expected.
class NoZeroModes : public Error {
 public:
  NoZeroModes(const std::string& what, int count) : Error(what), count_(count) {}
  int count() const { return count_; }

 private:
  int count_;
};

class TrackingLoss : public Error {
 public:
  TrackingLoss(const std::string& what, int step) : Error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

class SynthesisMismatch : public Error {
 public:
  SynthesisMismatch(const std::string& what, int row, int col)
      : Error(what), row_(row), col_(col) {}
  int row() const { return row_; }
  int col() const { return col_; }

 private:
  int row_;
  int col_;
};

class StepSizeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgebraid
