#pragma once

#include <stdexcept>
#include <string>

namespace steklov {

// Violated contract on user-supplied data (bad truncation, malformed file, ...).
class input_error : public std::invalid_argument {
public:
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical breakdown: degenerate map, singular system, crowding-level accuracy loss.
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class degenerate_shape_error : public numerical_error {
public:
    explicit degenerate_shape_error(const std::string& what) : numerical_error(what) {}
};

} // namespace steklov
