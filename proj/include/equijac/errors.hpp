#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace equijac {

/// Thrown when an iterative numeric procedure fails to converge or a
/// computed quantity falls outside its guaranteed range.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown while parsing or validating a run configuration. Carries the
/// offending field name so the CLI can report it.
struct ConfigError : std::runtime_error {
    ConfigError(std::string field_name, const std::string& message)
        : std::runtime_error("field '" + field_name + "': " + message),
          field(std::move(field_name)) {}
    std::string field;
};

}  // namespace equijac
