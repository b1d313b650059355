#pragma once

#include <stdexcept>
#include <string>

namespace sepchain {

// evaluation requested within eps_dom of a trig/radial singularity
struct DomainViolation : std::runtime_error {
    explicit DomainViolation(const std::string& what) : std::runtime_error(what) {}
};

// a discriminant under a square root vanished (degenerate orbit data)
struct DegenerateOrbit : std::runtime_error {
    explicit DegenerateOrbit(const std::string& what) : std::runtime_error(what) {}
};

// bad system description or config
struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// adaptive integrator could not proceed
struct StepUnderflow : std::runtime_error {
    explicit StepUnderflow(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sepchain
