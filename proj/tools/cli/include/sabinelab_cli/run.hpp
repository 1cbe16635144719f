#pragma once

#include "sabinelab_cli/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace sabinelab::disk {
struct Resonance;
}

namespace sabinelab::cli {

/// Executes a validated config.  Returns the process exit status for
/// outcomes that are not errors (verify with failing criteria returns 1);
/// module errors propagate as exceptions.
int run(const RunConfig& cfg, std::ostream& log);

/// Inverse of disk::write_resonance_csv.  Throws IoError.
std::vector<disk::Resonance> read_resonance_csv(const std::string& path);

/// Maps an exception to 2 (config), 3 (numerical), 4 (I/O) or 1.
int exit_code_for(const std::exception& e);

}  // namespace sabinelab::cli
