#pragma once

#include <stdexcept>
#include <string>

namespace dtn {

enum class ErrorKind {
    config,          // bad configuration / user input
    invalid_domain,  // geometry that violates a precondition (e.g. rho <= 0)
    unsupported,     // valid input outside the implemented scope
    numerical,       // solver breakdown, ellipticity violation, divergence
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace dtn
