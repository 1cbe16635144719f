#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sabinelab::cli {

struct RunConfig {
    std::string command;  ///< bounds | resonances | bands | verify | plot
    std::string problem = "transparent";
    double c = 2.0;
    double alpha = 1.0;
    double a = 2.0;
    double v_exponent = 1.0;  ///< V = v_coef (Re lambda)^v_exponent
    double v_coef = 1.0;
    double h = 1e-3;          ///< semiclassical parameter for bounds/bands of the delta problem
    double re_min = 200.0, re_max = 300.0;
    double im_floor = -3.0;
    int n_min = 0, n_max = -1;
    int grid = 257;
    int nmax = 8;
    int bands = 3;
    std::string family = "all";  ///< resonances: all | glancing (delta only)
    std::string fig = "circle";
    std::vector<std::string> criteria;  ///< verify subset; empty = all
    std::string out = "out";
    int workers = 0;
};

/// Flat `key = value` lines; `#` starts a comment; '-' and '_' are interchangeable in keys.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Applies one key; throws ConfigError for unknown keys or malformed values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Throws ConfigError naming the violated invariant.
void validate(const RunConfig& cfg);

/// Canonical `key=value` lines of every field that affects results
/// (everything but out and workers).
std::string canonical(const RunConfig& cfg);

/// FNV-1a 64 of canonical(cfg), as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace sabinelab::cli
