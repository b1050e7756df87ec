#ifndef MLUC_ERRORS_HPP
#define MLUC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mluc {

// Base class for every error raised by the library.  The CLI maps all of
// them to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  // position is a 1-based column; end of input is length + 1.
  SyntaxError(std::size_t position, std::string expected)
      : Error("syntax error at offset " + std::to_string(position) + ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class SizeLimit : public Error {
 public:
  using Error::Error;
};

class BadRank : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// A builder assertion failed.  This is always a bug, never a rejection.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class BadModel : public Error {
 public:
  using Error::Error;
};

}  // namespace mluc

#endif  // MLUC_ERRORS_HPP
