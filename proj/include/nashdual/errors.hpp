#pragma once

#include <stdexcept>
#include <string>

namespace nashdual {

// Bad user input: malformed files, out-of-range dimensions, invalid profiles.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine failed to meet its contract (bracket not found,
// iteration cap exceeded, cross-check outside tolerance).
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace nashdual
