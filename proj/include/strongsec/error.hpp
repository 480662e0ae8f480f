#pragma once

#include <stdexcept>
#include <string>

namespace strongsec {

// All library failures derive from Error so the CLI can map them to exit 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int col)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class VariableChannel : public ParseError {
 public:
  using ParseError::ParseError;
};

class OpenProcess : public ParseError {
 public:
  using ParseError::ParseError;
};

class InvalidPosition : public Error {
 public:
  using Error::Error;
};

class NotARedex : public Error {
 public:
  using Error::Error;
};

class DomainMismatch : public Error {
 public:
  using Error::Error;
};

class NotPublic : public Error {
 public:
  using Error::Error;
};

class NameClash : public Error {
 public:
  using Error::Error;
};

class MalformedCipher : public Error {
 public:
  using Error::Error;
};

}  // namespace strongsec
