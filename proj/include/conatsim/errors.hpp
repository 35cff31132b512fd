#pragma once

#include <stdexcept>
#include <string>

namespace conatsim {

/// Thrown when a state or operation violates a physical invariant
/// (uncertainty principle, symplectic condition, singular homodyne
/// marginal, indefinite covariance). Contract violations such as bad
/// mode indices throw std::invalid_argument instead.
class PhysicsError : public std::runtime_error {
  public:
    explicit PhysicsError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace conatsim
