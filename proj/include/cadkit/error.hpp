#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cadkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed polynomial, formula or tree text. `position` is a 0-based byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  size_t position() const { return position_; }

 private:
  size_t position_;
};

/// Operands built over different variable orders, or a variable unknown to an order.
class OrderError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated (degree too small, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A projection polynomial vanishes identically over a positive-dimensional cell.
class NotWellOriented : public Error {
 public:
  NotWellOriented(std::vector<int> cell_index, std::string polynomial)
      : Error("not well-oriented: " + polynomial + " nullifies over cell " + format_index(cell_index)),
        cell_index_(std::move(cell_index)),
        polynomial_(std::move(polynomial)) {}
  const std::vector<int>& cell_index() const { return cell_index_; }
  const std::string& polynomial() const { return polynomial_; }

 private:
  static std::string format_index(const std::vector<int>& idx) {
    std::string s = "(";
    for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
    return s + ")";
  }
  std::vector<int> cell_index_;
  std::string polynomial_;
};

/// An internal invariant failed; always a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cadkit
