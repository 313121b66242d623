#pragma once

#include <stdexcept>
#include <string>

namespace ellint {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ellint
