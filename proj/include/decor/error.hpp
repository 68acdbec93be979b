#ifndef DECOR_ERROR_HPP
#define DECOR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace decor {

struct DecorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax error with position information.
struct ParseError : DecorError {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : DecorError("parse error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

// Ill-typed term; `path` locates the offending subterm (child indices from the root).
struct TypeError : DecorError {
  std::string path;
  TypeError(const std::string& msg, std::string path_ = "")
      : DecorError(path_.empty() ? msg : msg + " (at subterm " + path_ + ")"), path(std::move(path_)) {}
};

// Constructor not available in the active theory.
struct DecorationError : DecorError {
  using DecorError::DecorError;
};

// Rule application / derivation checking failure.
struct KernelError : DecorError {
  using DecorError::DecorError;
};

// Term has no interpretation in the requested model kind.
struct EvalError : DecorError {
  using DecorError::DecorError;
};

// Input outside the fragment a procedure supports (e.g. two locations).
struct FragmentError : DecorError {
  using DecorError::DecorError;
};

struct MissingInhabitantError : DecorError {
  using DecorError::DecorError;
};

}  // namespace decor

#endif
