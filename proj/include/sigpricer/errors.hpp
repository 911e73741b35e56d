#pragma once

#include <stdexcept>
#include <string>

namespace sigpricer {

// Raised when a computation produces non-finite or otherwise unusable numbers
// (as opposed to std::invalid_argument, which signals a caller error).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sigpricer
