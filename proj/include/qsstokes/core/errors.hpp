#pragma once

#include <stdexcept>
#include <string>

namespace qss {

/// Bad configuration or precondition violation (odd N, mismatched grids, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A quantity was requested where it is not defined (singular point, non-finite data).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Off-interface evaluation requested inside the excluded collar around the interface.
class ProximityError : public DomainError {
 public:
  ProximityError(const std::string& what, double distance, double collar)
      : DomainError(what), distance_(distance), collar_(collar) {}
  double distance() const noexcept { return distance_; }
  double collar() const noexcept { return collar_; }

 private:
  double distance_;
  double collar_;
};

}  // namespace qss
