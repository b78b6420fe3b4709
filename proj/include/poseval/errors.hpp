#pragma once

#include <stdexcept>
#include <string>

namespace poseval {

// Base class for every recoverable toolkit error. Precondition violations
// (mismatched lengths, bad argument ranges) throw std::invalid_argument
// instead; those indicate caller bugs rather than bad data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// geometry
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};
class NonConvergence : public Error {
 public:
  using Error::Error;
};
class BehindCamera : public Error {
 public:
  using Error::Error;
};

// symmetry
class InvalidIncrement : public Error {
 public:
  using Error::Error;
};

// assignment
class NonFiniteCost : public Error {
 public:
  using Error::Error;
};
class TooLarge : public Error {
 public:
  using Error::Error;
};

// evaluation
class MissingModel : public Error {
 public:
  using Error::Error;
};

// fieldcal
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class NonPositiveDepth : public Error {
 public:
  using Error::Error;
};
class NoValidPixels : public Error {
 public:
  using Error::Error;
};
class TooFewObjects : public Error {
 public:
  using Error::Error;
};
class DegenerateSamples : public Error {
 public:
  using Error::Error;
};

// io; carries a file/record context in the message
class ParseError : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace poseval
