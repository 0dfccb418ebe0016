#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace bump {

/// Invalid physical parameter, topology, stimulus or run configuration.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Membrane potential left the finite range.
class NumericOverflowError : public std::runtime_error {
public:
    NumericOverflowError(const std::string& what, std::optional<std::size_t> neuron = {},
                         std::optional<std::size_t> step = {})
        : std::runtime_error(what), neuron_(neuron), step_(step) {}

    std::optional<std::size_t> neuron() const { return neuron_; }
    std::optional<std::size_t> step() const { return step_; }

private:
    std::optional<std::size_t> neuron_;
    std::optional<std::size_t> step_;
};

/// Malformed CSV/JSON input. `line()` is 1-based, 0 when not line oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Sweep results that do not cover the requested width set.
class IncompleteSweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) {
        throw ParameterError(message);
    }
}

} // namespace detail
} // namespace bump
