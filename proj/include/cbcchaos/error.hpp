#pragma once

#include <stdexcept>
#include <string>

namespace cbcchaos {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WidthMismatch : public Error {
 public:
  using Error::Error;
};

class MalformedSpec : public Error {
 public:
  using Error::Error;
};

class WidthTooLarge : public Error {
 public:
  using Error::Error;
};

class WidthTooSmall : public Error {
 public:
  using Error::Error;
};

class EmptyAlphabet : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class CounterExhausted : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace cbcchaos
