#pragma once

#include <stdexcept>
#include <string>

namespace buchstab {

// Input outside the mathematical domain of an operation (ln of a non-positive value, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Index or argument outside the range covered by a table or ledger.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Requested precision exceeds what a stored constant can deliver.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation would exceed its configured memory or work budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reading or writing a stored artifact failed (version, checksum, I/O).
class PersistenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace buchstab
