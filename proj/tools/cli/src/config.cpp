#include "sabinelab_cli/config.hpp"

#include "sabinelab/disk.hpp"
#include "sabinelab/errors.hpp"
#include "sabinelab/reflectivity.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sabinelab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string k) {
    k = trim(k);
    while (!k.empty() && k.front() == '-') k.erase(k.begin());
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) {
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
    return x;
}

int to_int(const std::string& key, const std::string& v) {
    int x = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) {
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
    return x;
}

template <class T, class F>
void range(const std::string& key, const std::string& v, T& lo, T& hi, F conv) {
    const auto colon = v.find(':');
    if (colon == std::string::npos) throw ConfigError(key + ": expected A:B, got '" + v + "'");
    lo = conv(key, trim(v.substr(0, colon)));
    hi = conv(key, trim(v.substr(colon + 1)));
}

std::string unquote(std::string v) {
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) {
        return v.substr(1, v.size() - 2);
    }
    return v;
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        kv[normalize_key(line.substr(0, eq))] = unquote(trim(line.substr(eq + 1)));
    }
    return kv;
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
    const std::string key = normalize_key(raw_key);
    const std::string v = trim(value);
    if (key == "command") cfg.command = v;
    else if (key == "problem") cfg.problem = v;
    else if (key == "c") cfg.c = to_double(key, v);
    else if (key == "alpha") cfg.alpha = to_double(key, v);
    else if (key == "a") cfg.a = to_double(key, v);
    else if (key == "v_exponent") cfg.v_exponent = to_double(key, v);
    else if (key == "v_coef") cfg.v_coef = to_double(key, v);
    else if (key == "h") cfg.h = to_double(key, v);
    else if (key == "re") range(key, v, cfg.re_min, cfg.re_max, to_double);
    else if (key == "im_floor") cfg.im_floor = to_double(key, v);
    else if (key == "n") range(key, v, cfg.n_min, cfg.n_max, to_int);
    else if (key == "grid") cfg.grid = to_int(key, v);
    else if (key == "nmax") cfg.nmax = to_int(key, v);
    else if (key == "bands") cfg.bands = to_int(key, v);
    else if (key == "family") cfg.family = v;
    else if (key == "fig") cfg.fig = v;
    else if (key == "out") cfg.out = v;
    else if (key == "workers") cfg.workers = to_int(key, v);
    else if (key == "criteria") {
        cfg.criteria.clear();
        std::stringstream ss(v);
        for (std::string item; std::getline(ss, item, ',');) {
            if (!trim(item).empty()) cfg.criteria.push_back(trim(item));
        }
    } else {
        throw ConfigError("unknown setting '" + raw_key + "'");
    }
}

void validate(const RunConfig& cfg) {
    static const char* commands[] = {"bounds", "resonances", "bands", "verify", "plot"};
    if (std::none_of(std::begin(commands), std::end(commands), [&](const char* c) { return cfg.command == c; })) {
        throw ConfigError("command must be one of bounds|resonances|bands|verify|plot");
    }
    if (cfg.problem == "transparent") {
        disk::validate(disk::Transparent{cfg.c, cfg.alpha});
    } else if (cfg.problem == "delta") {
        disk::validate(disk::Delta{cfg.v_coef, cfg.v_exponent});
        if (cfg.command == "bounds" || cfg.command == "bands") {
            reflect::validate(reflect::DeltaPotential{cfg.v_coef, -cfg.v_exponent, cfg.h, {}});
        }
    } else if (cfg.problem == "damping") {
        disk::validate(disk::Damping{cfg.a});
    } else {
        throw ConfigError("problem must be one of transparent|delta|damping");
    }
    if (!(cfg.re_min > 0.0 && cfg.re_max > cfg.re_min)) throw ConfigError("re: need 0 < A < B");
    if (cfg.re_max > 20000.0) throw ConfigError("re: B must be <= 20000 (Bessel precondition box)");
    if (!(cfg.im_floor < 0.0)) throw ConfigError("im-floor must be < 0");
    if (cfg.im_floor < -50.0) throw ConfigError("im-floor must be >= -50 (Bessel precondition box)");
    if (cfg.n_min < 0 || (cfg.n_max >= 0 && cfg.n_max < cfg.n_min)) throw ConfigError("n: need 0 <= A <= B");
    if (cfg.n_max > 20000) throw ConfigError("n: B must be <= 20000");
    if (cfg.grid < 3) throw ConfigError("grid must be >= 3");
    if (cfg.nmax < 1) throw ConfigError("nmax must be >= 1");
    if (cfg.bands < 1 || cfg.bands > 99) throw ConfigError("bands must lie in [1, 99]");
    if (cfg.workers < 0) throw ConfigError("workers must be >= 0");
    if (!(cfg.h > 0.0 && cfg.h < 1.0)) throw ConfigError("h must lie in (0, 1)");
    if (cfg.family != "all" && cfg.family != "glancing") throw ConfigError("family must be all|glancing");
    if (cfg.family == "glancing" && cfg.problem != "delta") {
        throw ConfigError("family = glancing requires problem = delta");
    }
    if (cfg.fig != "circle" && cfg.fig != "resbands") throw ConfigError("fig must be circle|resbands");
    if (cfg.command == "bands" && cfg.problem != "delta") throw ConfigError("bands requires problem = delta");
    if (cfg.out.empty()) throw ConfigError("out must be a non-empty path");
}

std::string canonical(const RunConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "command=" << cfg.command << "\nproblem=" << cfg.problem << "\nc=" << cfg.c << "\nalpha=" << cfg.alpha
       << "\na=" << cfg.a << "\nv_exponent=" << cfg.v_exponent << "\nv_coef=" << cfg.v_coef << "\nh=" << cfg.h
       << "\nre=" << cfg.re_min << ":" << cfg.re_max << "\nim_floor=" << cfg.im_floor << "\nn=" << cfg.n_min << ":"
       << cfg.n_max << "\ngrid=" << cfg.grid << "\nnmax=" << cfg.nmax << "\nbands=" << cfg.bands
       << "\nfamily=" << cfg.family << "\nfig=" << cfg.fig << "\ncriteria=";
    for (std::size_t i = 0; i < cfg.criteria.size(); ++i) os << (i ? "," : "") << cfg.criteria[i];
    os << "\n";
    return os.str();
}

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical(cfg)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sabinelab::cli
