#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oscbath {

// Bad parameters, grids that do not line up, malformed scenario files.
// The CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-finite state met during integration. The CLI maps this to exit code 3.
class divergence_error : public std::runtime_error {
public:
    divergence_error(const std::string& msg, std::size_t step_index)
        : std::runtime_error(msg), step(step_index) {}
    std::size_t step;
};

} // namespace oscbath
