#include "sabinelab/errors.hpp"
#include "sabinelab_cli/config.hpp"
#include "sabinelab_cli/run.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

struct Flag {
    const char* name;
    const char* key;
    const char* help;
};

constexpr Flag kFlags[] = {
    {"--problem", "problem", "transparent | delta | damping"},
    {"--c", "c", "interior wave speed (transparent)"},
    {"--alpha", "alpha", "transmission coupling (transparent)"},
    {"--a", "a", "boundary damping coefficient (damping)"},
    {"--v-exponent", "v_exponent", "V = v_coef (Re lambda)^v_exponent (delta)"},
    {"--v-coef", "v_coef", "coefficient of V (delta)"},
    {"--semiclassical-h", "h", "semiclassical parameter for delta bounds/bands"},
    {"--re", "re", "Re lambda window A:B"},
    {"--im-floor", "im_floor", "lowest Im lambda scanned"},
    {"--n", "n", "mode range A:B"},
    {"--grid", "grid", "initial xi grid size"},
    {"--nmax", "nmax", "largest orbit length N"},
    {"--bands", "bands", "number of glancing bands"},
    {"--family", "family", "resonances: all | glancing (delta)"},
    {"--fig", "fig", "plot: circle | resbands"},
    {"--criteria", "criteria", "verify: comma-separated ids (default all)"},
    {"--out", "out", "output directory"},
    {"--workers", "workers", "worker threads (0 = all cores)"},
};

}  // namespace

int main(int argc, char** argv) {
    using namespace sabinelab;
    CLI::App app{"sabinelab: decay-rate bands and disk resonances"};
    app.require_subcommand(1);
    std::map<std::string, std::string> values;
    std::string config_file;
    std::map<std::string, std::vector<CLI::Option*>> seen;
    for (const char* name : {"bounds", "resonances", "bands", "verify", "plot"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_file, "flat key = value file; flags override it");
        for (const Flag& f : kFlags) seen[f.key].push_back(sub->add_option(f.name, values[f.key], f.help));
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    cli::RunConfig cfg;
    try {
        cfg.command = app.get_subcommands().front()->get_name();
        if (!config_file.empty()) {
            for (const auto& [k, v] : cli::read_config_file(config_file)) {
                if (k != "command") cli::apply_setting(cfg, k, v);
            }
        }
        for (const Flag& f : kFlags) {
            for (CLI::Option* o : seen[f.key]) {
                if (o->count() > 0) cli::apply_setting(cfg, f.key, values[f.key]);
            }
        }
        return cli::run(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "sabinelab: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
}
