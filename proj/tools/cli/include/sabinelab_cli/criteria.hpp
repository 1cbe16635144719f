#pragma once

#include <string>
#include <vector>

namespace sabinelab::cli {

struct CriterionResult {
    std::string id;  ///< "1".."10", or "9x" for the exponent-one diagnostic
    std::string name;
    bool pass = false;
    bool gating = true;
    std::string measured;
    double seconds = 0.0;
};

/// Ids run by `verify` with no selection, in order.
std::vector<std::string> criterion_ids();

/// Throws ConfigError for an unknown id.
CriterionResult run_criterion(const std::string& id, int workers = 0);

/// "PASS [7] name: measured (12.3 s)"
std::string format_result(const CriterionResult& r);

}  // namespace sabinelab::cli
