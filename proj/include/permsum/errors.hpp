#pragma once

#include <stdexcept>
#include <string>

namespace permsum {

/// Malformed or out-of-contract input (empty multiset, bad partition, n too small).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Text that could not be read as a multiset or rational.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size cap, iteration budget or memory budget would be exceeded.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// decompose() on a multiset with a single distinct value.
class NoDiversity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace permsum
