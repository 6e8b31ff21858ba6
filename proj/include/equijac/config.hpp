#pragma once

// Run configuration: a flat key = value text format, one assignment per
// line, '#' comments. Parsing re-validates every constraint of the owning
// modules and serialization round-trips losslessly.

#include <cstdint>
#include <string>
#include <vector>

#include "equijac/expansion.hpp"

namespace equijac {

struct RunConfig {
    std::string experiment = "selftest";

    // operator
    double alpha = 0.5;
    double beta = 0.5;
    std::vector<double> b_coeffs;

    // discretization
    int basis_size = 128;
    int quad_points = 0;  // 0 means 2 * basis_size

    std::uint64_t seed = 1;
    std::string output_dir = "out";

    // spectrum / eigfun
    int n_max = 20;
    std::vector<int> n_list = {0, 1, 2, 3};
    int grid_points = 200;

    // asymptotics
    std::vector<std::string> lemmas;  // empty selects all
    int n_lo = 10;
    int n_hi = 60;
    int t_points = 48;

    // summability
    std::string weights = "rectangular";  // or "cesaro"
    double theta = 1.0;

    // kernel-diff
    std::vector<double> x_list;
    std::vector<int> N_list;
    int y_points = 800;

    // equiconv
    std::string function = "indicator 0.3 0.8";
    double gamma_lo = 0.2;
    double gamma_hi = 1.3;

    int resolved_quad_points() const {
        return quad_points > 0 ? quad_points : 2 * basis_size;
    }
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const RunConfig& config);

/// Throws ConfigError (naming the field) on any violated constraint.
void validate_config(const RunConfig& config);

/// Parses a function descriptor: "indicator a b", "bump center width",
/// "poly c0 c1 ...", "cosine k", or "zero".
PiecewiseFunction parse_function_descriptor(const std::string& descriptor);

SummabilitySequence summability_from_config(const RunConfig& config);

}  // namespace equijac
