#ifndef PAIRCOMP_ERROR_H_
#define PAIRCOMP_ERROR_H_

#include <stdexcept>
#include <string>

namespace paircomp {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An estimator or consistency test was handed a comparison graph that does
// not connect all items.
class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

// The directed comparison graph is not strongly connected, so the
// maximum-likelihood estimate does not exist or is not unique.
class FordViolation : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, long iterations)
      : Error(what), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

// Canonical labelling requested for more vertices than the permutation scan
// supports.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// Malformed input files. `line` is 1-based; 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class BadHeader : public ParseError {
 public:
  using ParseError::ParseError;
};
class DuplicatePair : public ParseError {
 public:
  using ParseError::ParseError;
};
class NegativeCount : public ParseError {
 public:
  using ParseError::ParseError;
};
class NotReciprocal : public ParseError {
 public:
  using ParseError::ParseError;
};
class BadDiagonal : public ParseError {
 public:
  using ParseError::ParseError;
};
class NonPositiveEntry : public ParseError {
 public:
  using ParseError::ParseError;
};

// A report was requested for a slice of results that is not present.
class MissingSlice : public Error {
 public:
  using Error::Error;
};

}  // namespace paircomp

#endif  // PAIRCOMP_ERROR_H_
