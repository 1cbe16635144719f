// Runs the acceptance criteria and prints one PASS/FAIL/INFO line each.
// Usage: sabinelab_acceptance [--workers N] [id ...]   (no ids = all)

#include "sabinelab/errors.hpp"
#include "sabinelab_cli/criteria.hpp"

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    using namespace sabinelab::cli;
    int workers = 0;
    std::vector<std::string> ids;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--workers" && i + 1 < argc) {
            workers = std::atoi(argv[++i]);
        } else {
            ids.push_back(arg);
        }
    }
    if (ids.empty()) ids = criterion_ids();

    bool ok = true;
    for (const std::string& id : ids) {
        try {
            const CriterionResult r = run_criterion(id, workers);
            std::cout << format_result(r) << std::endl;
            if (r.gating && !r.pass) ok = false;
        } catch (const std::exception& e) {
            std::cout << "FAIL [" << id << "] error: " << e.what() << std::endl;
            ok = false;
        }
    }
    return ok ? 0 : 1;
}
