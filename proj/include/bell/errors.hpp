#pragma once

#include <stdexcept>

namespace bell {

/// A caller-supplied configuration violates a precondition.
class InvalidConfiguration : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Name lookup failed (model names, setting pairs).
class NotFound : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// A model does not expose a closed-form lambda density.
class QuadratureUnavailable : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace bell
