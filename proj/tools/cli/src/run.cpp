#include "sabinelab_cli/run.hpp"

#include "sabinelab/billiards.hpp"
#include "sabinelab/disk.hpp"
#include "sabinelab/errors.hpp"
#include "sabinelab/reflectivity.hpp"
#include "sabinelab/sabine.hpp"
#include "sabinelab/specfun.hpp"
#include "sabinelab_cli/criteria.hpp"
#include "sabinelab_cli/figure.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#ifndef SABINELAB_VERSION
#define SABINELAB_VERSION "0.0.0"
#endif

namespace sabinelab::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

fs::path out_path(const RunConfig& cfg, const std::string& name) { return fs::path(cfg.out) / name; }

void ensure_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw IoError("cannot create output directory '" + cfg.out + "': " + ec.message());
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write '" + p.string() + "'");
    os << content;
    os.flush();
    if (!os) throw IoError("write failed for '" + p.string() + "'");
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json problem_json(const RunConfig& cfg) {
    json j;
    j["problem"] = cfg.problem;
    if (cfg.problem == "transparent") {
        j["c"] = cfg.c;
        j["alpha"] = cfg.alpha;
    } else if (cfg.problem == "delta") {
        j["v_coef"] = cfg.v_coef;
        j["v_exponent"] = cfg.v_exponent;
    } else {
        j["a"] = cfg.a;
    }
    return j;
}

disk::SecularProblem secular_problem(const RunConfig& cfg) {
    if (cfg.problem == "transparent") return disk::Transparent{cfg.c, cfg.alpha};
    if (cfg.problem == "delta") return disk::Delta{cfg.v_coef, cfg.v_exponent};
    return disk::Damping{cfg.a};
}

reflect::ReflectivityModel reflectivity_model(const RunConfig& cfg) {
    if (cfg.problem == "transparent") return reflect::TransparentObstacle{cfg.c, cfg.alpha};
    if (cfg.problem == "delta") return reflect::DeltaPotential{cfg.v_coef, -cfg.v_exponent, cfg.h, {}};
    return reflect::BoundaryDamping{cfg.a, {}};
}

void write_manifest(const RunConfig& cfg, double seconds, const std::vector<std::string>& outputs) {
    json m;
    m["tool"] = "sabinelab";
    m["version"] = SABINELAB_VERSION;
    m["command"] = cfg.command;
    m["config_hash"] = config_hash(cfg);
    m["config"] = canonical(cfg);
    m["problem"] = problem_json(cfg);
    m["workers"] = cfg.workers;
    m["wall_time_s"] = seconds;
    m["outputs"] = outputs;
    write_file(out_path(cfg, "manifest_" + cfg.command + ".json"), m.dump(2) + "\n");
}

sabine::SabineBand band_for(const RunConfig& cfg) {
    sabine::GridSpec g;
    g.points = cfg.grid;
    g.workers = cfg.workers;
    return sabine::sabine_bounds(billiards::ConvexDomain::disk(), reflectivity_model(cfg), cfg.nmax, g);
}

// ---- commands ----------------------------------------------------------------

std::vector<std::string> cmd_bounds(const RunConfig& cfg, std::ostream& log) {
    const sabine::SabineBand b = band_for(cfg);
    json j = problem_json(cfg);
    if (cfg.problem == "delta") j["h"] = cfg.h;
    j["wave_speed"] = b.wave_speed;
    j["lower"] = b.lower;
    j["upper"] = b.upper;
    j["n_max"] = b.n_max;
    j["xi_points"] = b.xi_points;
    j["footpoints"] = b.footpoints;
    j["collar"] = b.collar;
    json per = json::array();
    for (const sabine::NExtrema& e : b.per_n) {
        per.push_back({{"n", e.n},
                       {"min", e.min},
                       {"max", e.max},
                       {"argmin", {{"s", e.argmin.s}, {"xi", e.argmin.xi}}},
                       {"argmax", {{"s", e.argmax.s}, {"xi", e.argmax.xi}}}});
    }
    j["per_n"] = per;
    write_file(out_path(cfg, "bounds.json"), j.dump(2) + "\n");
    log << "band [" << b.lower << ", " << b.upper << "]\n";
    return {"bounds.json"};
}

std::vector<disk::Resonance> glancing_scan(const RunConfig& cfg) {
    const disk::Delta d{cfg.v_coef, cfg.v_exponent};
    const int n_lo = std::max(1, cfg.n_min > 0 ? cfg.n_min : static_cast<int>(std::floor(0.9 * cfg.re_min)));
    const int n_hi = cfg.n_max >= 0 ? cfg.n_max : static_cast<int>(std::ceil(cfg.re_max));
    const int count = std::max(0, n_hi - n_lo + 1);
    std::vector<std::vector<disk::Resonance>> per(count);
    std::vector<std::exception_ptr> errs(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < count;) {
            try {
                per[i] = disk::glancing_family(d, n_lo + i, cfg.bands);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    unsigned nw = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : std::thread::hardware_concurrency();
    nw = std::max(1u, nw);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<disk::Resonance> out;
    for (auto& v : per) {
        for (auto& r : v) {
            const double re = r.lambda.real(), im = r.lambda.imag();
            if (re >= cfg.re_min && re <= cfg.re_max && im >= cfg.im_floor) out.push_back(std::move(r));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const disk::Resonance& a, const disk::Resonance& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.n < b.n;
    });
    return out;
}

std::vector<std::string> cmd_resonances(const RunConfig& cfg, std::ostream& log) {
    std::vector<disk::Resonance> rows;
    std::vector<disk::CellReport> incomplete;
    if (cfg.family == "glancing") {
        rows = glancing_scan(cfg);
    } else {
        disk::ScanWindow w{cfg.re_min, cfg.re_max, cfg.im_floor, 0.25, cfg.n_min, cfg.n_max};
        disk::ScanOptions opt;
        opt.workers = cfg.workers;
        disk::ScanResult sr = disk::scan(secular_problem(cfg), w, opt);
        rows = std::move(sr.resonances);
        incomplete = std::move(sr.incomplete);
    }
    std::ostringstream csv;
    disk::write_resonance_csv(csv, rows);
    write_file(out_path(cfg, "resonances.csv"), csv.str());
    log << rows.size() << " resonances\n";
    if (!incomplete.empty()) {
        for (const disk::CellReport& c : incomplete) {
            log << "incomplete cell: n=" << c.n << " Re [" << c.re_lo << ", " << c.re_hi << "] Im [" << c.im_lo
                << ", " << c.im_hi << "] expected " << c.expected << " found " << c.found << "\n";
        }
        const disk::CellReport& c = incomplete.front();
        throw IncompleteCell("scan left " + std::to_string(incomplete.size()) + " incomplete cell(s)", c.re_lo,
                             c.re_hi, c.im_lo, c.im_hi, c.n);
    }
    return {"resonances.csv"};
}

std::vector<std::string> cmd_bands(const RunConfig& cfg, std::ostream& log) {
    sabine::GlancingInput in;
    in.alpha_exp = -cfg.v_exponent;
    in.v0_min = in.v0_max = cfg.v_coef;
    const std::vector<sabine::GlancingBand> bands = sabine::glancing_bands(in, cfg.h, cfg.bands);
    json j = problem_json(cfg);
    j["h"] = cfg.h;
    j["alpha_exp"] = in.alpha_exp;
    j["slope"] = sabine::band_slope(in.alpha_exp);
    json arr = json::array();
    for (const sabine::GlancingBand& b : bands) {
        arr.push_back({{"j", b.j},
                       {"zeta_j", b.zeta_j},
                       {"im_phi", b.im_phi},
                       {"b_min", b.b_min},
                       {"b_max", b.b_max},
                       {"im_lambda_min", b.im_lambda_min},
                       {"im_lambda_max", b.im_lambda_max},
                       {"gap_below", b.gap_below}});
        log << "band " << b.j << ": Im lambda in [" << b.im_lambda_min << ", " << b.im_lambda_max << "]\n";
    }
    j["bands"] = arr;
    write_file(out_path(cfg, "bands.json"), j.dump(2) + "\n");
    return {"bands.json"};
}

int cmd_verify(const RunConfig& cfg, std::ostream& log, std::vector<std::string>& outputs) {
    const std::vector<std::string> ids = cfg.criteria.empty() ? criterion_ids() : cfg.criteria;
    json arr = json::array();
    bool ok = true;
    for (const std::string& id : ids) {
        const CriterionResult r = run_criterion(id, cfg.workers);
        log << format_result(r) << std::endl;
        if (r.gating && !r.pass) ok = false;
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"pass", r.pass},
                       {"gating", r.gating},
                       {"measured", r.measured}});
    }
    json j;
    j["criteria"] = arr;
    j["all_pass"] = ok;
    write_file(out_path(cfg, "verify.json"), j.dump(2) + "\n");
    outputs.push_back("verify.json");
    return ok ? 0 : 1;
}

std::vector<std::string> cmd_plot(const RunConfig& cfg, std::ostream& log) {
    const json m = json::parse(read_file(out_path(cfg, "manifest_resonances.json")), nullptr, false);
    if (m.is_discarded() || !m.contains("problem")) throw IoError("manifest_resonances.json is malformed");
    if (m["problem"] != problem_json(cfg)) {
        throw ConfigError("plot: problem parameters differ from the resonance run (" + m["problem"].dump() + ")");
    }
    const std::vector<disk::Resonance> rows = read_resonance_csv(out_path(cfg, "resonances.csv").string());
    std::vector<FigureSpec> panels;
    const billiards::ConvexDomain dom = billiards::ConvexDomain::disk();
    if (cfg.fig == "circle") {
        if (cfg.problem == "delta") throw ConfigError("plot: fig circle needs problem transparent or damping");
        const reflect::ReflectivityModel model = reflectivity_model(cfg);
        const double c = reflect::wave_speed(model);
        Overlay curve{"billiard decay rate", "#2ca02c", {}};
        const double t_max = std::min(1.0, 1.0 / c);
        for (int i = 0; i <= 400; ++i) {
            const double t = t_max * i / 400.0;
            const double xi = c * t;
            if (xi >= 1.0 - 1e-9) break;
            const sabine::Quotient q = sabine::sabine_quotient(dom, model, {0.0, xi}, 1);
            curve.points.emplace_back(t, q.total_transmission ? NAN : q.value);
        }
        FigureSpec top{Axis::tangent_freq, Axis::im_lambda, "Im λ against n / Re λ", {curve}};
        const sabine::SabineBand b = band_for(cfg);
        double re_lo = INFINITY, re_hi = -INFINITY;
        for (const auto& r : rows) {
            re_lo = std::min(re_lo, r.lambda.real());
            re_hi = std::max(re_hi, r.lambda.real());
        }
        FigureSpec bottom{Axis::re_lambda, Axis::im_lambda, "Im λ against Re λ",
                          {{"upper bound", "#d62728", {{re_lo, b.upper}, {re_hi, b.upper}}},
                           {"lower bound", "#d62728", {{re_lo, b.lower}, {re_hi, b.lower}}}}};
        panels = {top, bottom};
    } else {
        if (cfg.problem != "delta") throw ConfigError("plot: fig resbands needs problem delta");
        sabine::GlancingInput in;
        in.alpha_exp = -cfg.v_exponent;
        in.v0_min = in.v0_max = cfg.v_coef;
        const std::vector<sabine::GlancingBand> bands = sabine::glancing_bands(in, cfg.h, cfg.bands);
        const double slope = sabine::band_slope(in.alpha_exp);
        double x_lo = INFINITY, x_hi = -INFINITY;
        for (const auto& r : rows) {
            if (r.lambda.real() <= 0.0) continue;
            x_lo = std::min(x_lo, std::log10(r.lambda.real()));
            x_hi = std::max(x_hi, std::log10(r.lambda.real()));
        }
        FigureSpec spec{Axis::log_re_lambda, Axis::log_neg_im_lambda, "glancing resonance bands", {}};
        static const char* colors[] = {"#d62728", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};
        for (const sabine::GlancingBand& b : bands) {
            for (double bb : {b.b_min, b.b_max}) {
                Overlay o{bb == b.b_min ? "band " + std::to_string(b.j) : "", colors[(b.j - 1) % 5], {}};
                const double c0 = std::log10(-bb * b.im_phi);
                o.points = {{x_lo, c0 + slope * x_lo}, {x_hi, c0 + slope * x_hi}};
                spec.overlays.push_back(o);
                if (b.b_min == b.b_max) break;
            }
        }
        panels = {spec};
    }
    const std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    const std::string name = "fig_" + cfg.fig + ".svg";
    write_file(out_path(cfg, name), emit_figure(rows, panels, std::string("generated ") + stamp));
    log << "wrote " << name << "\n";
    return {name};
}

}  // namespace

std::vector<disk::Resonance> read_resonance_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::string line;
    std::getline(in, line);
    if (line.rfind("problem,n,re_lambda,im_lambda", 0) != 0) throw IoError(path + ": unexpected header");
    std::vector<disk::Resonance> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f[7];
        for (auto& s : f) std::getline(ss, s, ',');
        disk::Resonance r;
        try {
            r.problem = f[0];
            r.n = std::stoi(f[1]);
            r.lambda = {std::stod(f[2]), std::stod(f[3])};
            r.residual = std::stod(f[4]);
            r.tangent_freq = std::stod(f[6]);
        } catch (const std::exception&) {
            throw IoError(path + ": malformed row '" + line + "'");
        }
        for (auto k : {disk::SeedKind::normal, disk::SeedKind::transverse, disk::SeedKind::continuation,
                       disk::SeedKind::subdivision, disk::SeedKind::glancing}) {
            if (f[5] == disk::seed_name(k)) r.seed = k;
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

int run(const RunConfig& cfg, std::ostream& log) {
    validate(cfg);
    ensure_dir(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    auto seconds = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    std::vector<std::string> outputs;
    int status = 0;
    if (cfg.command == "bounds") outputs = cmd_bounds(cfg, log);
    else if (cfg.command == "bands") outputs = cmd_bands(cfg, log);
    else if (cfg.command == "plot") outputs = cmd_plot(cfg, log);
    else if (cfg.command == "verify") status = cmd_verify(cfg, log, outputs);
    else {
        try {
            outputs = cmd_resonances(cfg, log);
        } catch (const IncompleteCell&) {
            write_manifest(cfg, seconds(), {"resonances.csv"});
            throw;
        }
    }
    write_manifest(cfg, seconds(), outputs);
    return status;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const IoError*>(&e)) return 4;
    return 1;
}

}  // namespace sabinelab::cli
