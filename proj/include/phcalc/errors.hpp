#pragma once

#include <stdexcept>
#include <string>

namespace phcalc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arity or shape of the arguments do not agree.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A size guard (clause budget, net point cap) was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ModelMismatch : public Error {
 public:
  using Error::Error;
};

class NotInIdeal : public Error {
 public:
  using Error::Error;
};

class NonArchimedean : public Error {
 public:
  using Error::Error;
};

class InvalidPair : public Error {
 public:
  using Error::Error;
};

class InvalidLipschitz : public Error {
 public:
  using Error::Error;
};

class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace phcalc
