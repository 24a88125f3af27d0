#pragma once

#include <stdexcept>
#include <string>

namespace reusemap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// No tiling fits the on-chip buffers.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class RegionOverflow : public Error {
 public:
  using Error::Error;
};

class CapacityExceeded : public Error {
 public:
  using Error::Error;
};

class BufferOverflow : public Error {
 public:
  using Error::Error;
};

class AddressOutOfRange : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace reusemap
