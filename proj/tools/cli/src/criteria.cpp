#include "sabinelab_cli/criteria.hpp"

#include "sabinelab/billiards.hpp"
#include "sabinelab/disk.hpp"
#include "sabinelab/errors.hpp"
#include "sabinelab/reflectivity.hpp"
#include "sabinelab/sabine.hpp"
#include "sabinelab/specfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace sabinelab::cli {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = specfun::kPi;

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---- 1 ---------------------------------------------------------------------

CriterionResult special_functions(int) {
    CriterionResult r{"1", "special-function identities", false, true, "", 0.0};
    const cplx w = std::polar(1.0, 2.0 * kPi / 3.0);
    double conn = 0.0, im_a = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double s = -20.0 + 25.0 * i / 199.0;
        const cplx z(s, 0.0);
        const cplx a0 = specfun::airy(z).value, a1 = specfun::airy(w * z).value;
        const cplx a2 = specfun::airy(std::conj(w) * z).value;
        const double scale = std::abs(a0) + std::abs(a1) + std::abs(a2);
        conn = std::max(conn, std::abs(a0 + w * a1 + std::conj(w) * a2) / scale);
        const double am = std::abs(specfun::airy_minus(z).value);
        const double want = -1.0 / (4.0 * kPi * am * am);
        im_a = std::max(im_a, std::abs(specfun::phi_minus(z).imag() - want) / std::abs(want));
    }
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> order(0, 5000);
    std::uniform_real_distribution<double> re(1.0, 5000.0), im(-20.0, 20.0);
    double wr = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int n = order(rng);
        const cplx z(re(rng), im(rng));
        const specfun::ScaledBesselQuad q = specfun::bessel_quad_scaled(n, z);
        const double l = q.log_j + q.log_h;
        const cplx target = cplx(0.0, 2.0 / kPi) / z * std::exp(-l);
        const cplx wm = q.j * q.h1_prime - q.j_prime * q.h1;
        const double scale =
            std::max(std::abs(target), std::abs(q.j * q.h1_prime) + std::abs(q.j_prime * q.h1));
        wr = std::max(wr, std::abs(wm - target) / scale);
    }
    r.pass = conn < 1e-9 && im_a < 1e-9 && wr < 1e-9;
    r.measured = fmt("connection %.2e, Im Phi_- %.2e, Wronskian %.2e", conn, im_a, wr);
    return r;
}

// ---- 2, 3 ------------------------------------------------------------------

CriterionResult friedlander(int) {
    CriterionResult r{"2", "Friedlander symbols", false, true, "", 0.0};
    const specfun::AiryZeroTable zt = specfun::airy_zeros(10);
    double at_zeros = 0.0;
    for (double z : zt.zeros) at_zeros = std::max(at_zeros, std::abs(specfun::friedlander_symbols(z).psi_s - 1.0));
    const double x = -25.0;
    const specfun::FriedlanderSymbols f = specfun::friedlander_symbols(x);
    const double rs = f.psi_s, rd = f.psi_d / (-x), rds = std::abs(f.psi_ds) / std::sqrt(-x);
    const double worst = std::max({std::abs(rs - 1.0), std::abs(rd - 1.0), std::abs(rds - 1.0)});
    r.pass = at_zeros < 1e-8 && worst < 0.01;
    r.measured = fmt("max |Psi_S(zeta_j) - 1| %.2e; ratios at x=-25: %.5f %.5f %.5f", at_zeros, rs, rd, rds);
    return r;
}

CriterionResult airy_zero_identity(int) {
    CriterionResult r{"3", "Airy-zero identity for Im Phi_-", false, true, "", 0.0};
    const specfun::AiryZeroTable zt = specfun::airy_zeros(10);
    double worst = 0.0;
    for (std::size_t j = 0; j < zt.zeros.size(); ++j) {
        const double closed = specfun::im_phi_minus_closed_form(zt.zeros[j]);
        worst = std::max(worst, std::abs(zt.im_phi_minus[j] - closed) / std::abs(closed));
    }
    r.pass = worst < 1e-8;
    r.measured = fmt("max relative deviation %.2e over j = 1..10", worst);
    return r;
}

// ---- 4 ---------------------------------------------------------------------

CriterionResult billiard_suite(int) {
    CriterionResult r{"4", "billiard suite", false, true, "", 0.0};
    using namespace billiards;
    const ConvexDomain disk = ConvexDomain::disk();
    const ConvexDomain ell = ConvexDomain::ellipse(1.6, 1.0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xi(-0.95, 0.95), u(0.0, 1.0);
    double chord = 0.0, inv = 0.0;
    for (int i = 0; i < 50; ++i) {
        const PhasePoint q{u(rng) * disk.perimeter(), xi(rng)};
        const StepResult st = billiard_step(disk, q);
        chord = std::max(chord, std::abs(st.chord - 2.0 * std::sqrt(1.0 - q.xi * q.xi)));
        inv = std::max(inv, std::abs(std::abs(st.next.xi) - std::abs(q.xi)));
    }
    double jac = 0.0;
    for (const ConvexDomain* d : {&disk, &ell}) {
        for (int i = 0; i < 50; ++i) {
            const PhasePoint q{u(rng) * d->perimeter(), 0.9 * xi(rng)};
            jac = std::max(jac, std::abs(jacobian_determinant(*d, q) - 1.0));
        }
    }
    double expo = INFINITY;
    for (double s : {ell.argmax_curvature(), ell.argmin_curvature(), 0.3 * ell.perimeter()}) {
        const GlancingReport g = glancing_expansion_check(ell, s);
        expo = std::min({expo, g.normal_exponent, g.chord_exponent});
    }
    r.pass = chord <= 1e-12 && inv <= 1e-12 && jac <= 1e-6 && expo >= 0.9;
    r.measured = fmt("chord %.1e, |xi| drift %.1e, |det - 1| %.1e, min remainder exponent %.3f", chord, inv, jac,
                     expo);
    return r;
}

// ---- 5, 6 ------------------------------------------------------------------

CriterionResult sabine_seed(int) {
    CriterionResult r{"5", "Sabine quotient vs normal seed", false, true, "", 0.0};
    const billiards::ConvexDomain disk = billiards::ConvexDomain::disk();
    double worst = 0.0;
    std::ostringstream os;
    for (auto [c, a] : {std::pair{2.0, 1.0}, {2.0, 0.4}, {0.5, 1.0}, {0.5, 4.0}}) {
        const double q = sabine::sabine_quotient(disk, reflect::TransparentObstacle{c, a}, {0.0, 0.0}, 1).value;
        const double s = disk::seed_normal(disk::Transparent{c, a}, 0, 0).imag();
        worst = std::max(worst, std::abs(q - s));
        os << fmt("(%g,%g): %.10f ", c, a, q);
    }
    r.pass = worst < 1e-9;
    r.measured = os.str() + fmt("max diff %.1e", worst);
    return r;
}

CriterionResult fixed_n(int) {
    CriterionResult r{"6", "fixed-n seed convergence", false, true, "", 0.0};
    const disk::Transparent t{2.0, 1.0};
    double worst = -INFINITY;
    std::ostringstream os;
    for (int n : {0, 3}) {
        std::vector<double> x, y;
        for (int k = 10; k <= 40; ++k) {
            const cplx z0 = disk::seed_normal(t, n, k);
            const disk::Resonance res = disk::newton_refine(t, n, z0, 0.5, disk::SeedKind::normal);
            x.push_back(std::log(z0.real()));
            y.push_back(std::log(std::abs(res.lambda - z0)));
        }
        const double slope = fit_slope(x, y);
        worst = std::max(worst, slope);
        os << fmt("n=%d slope %.3f ", n, slope);
    }
    r.pass = worst <= -0.8;
    r.measured = os.str();
    return r;
}

// ---- 7, 8, 10 --------------------------------------------------------------

CriterionResult circle_band(int workers) {
    CriterionResult r{"7", "transparent c=2 alpha=1 band and cloud", false, true, "", 0.0};
    const billiards::ConvexDomain dom = billiards::ConvexDomain::disk();
    const reflect::TransparentObstacle m{2.0, 1.0};
    const sabine::SabineBand band = sabine::sabine_bounds(dom, m, 4);
    disk::ScanOptions opt;
    opt.workers = workers;
    const disk::ScanResult sr = disk::scan(disk::Transparent{2.0, 1.0}, {200.0, 300.0, -3.0, 0.25, 0, -1}, opt);
    int total = 0, in = 0, cloud = 0, cloud_ok = 0;
    double cloud_dev = 0.0;
    for (const disk::Resonance& res : sr.resonances) {
        const double im = res.lambda.imag();
        if (im < -3.0) continue;
        ++total;
        if (im >= band.lower - 0.05 && im <= band.upper + 0.05) ++in;
        if (res.tangent_freq <= 0.4) {
            ++cloud;
            const double q = sabine::sabine_quotient(dom, m, {0.0, m.c * res.tangent_freq}, 1).value;
            cloud_dev = std::max(cloud_dev, std::abs(im - q));
            if (std::abs(im - q) <= 0.1) ++cloud_ok;
        }
    }
    const double frac = total ? double(in) / total : 0.0;
    r.pass = total > 0 && frac >= 0.95 && cloud > 0 && cloud_ok == cloud && sr.incomplete.empty();
    r.measured = fmt("band [%.5f, %.5f]; %d/%d in band (%.1f%%); cloud max dev %.4f over %d; incomplete cells %zu",
                     band.lower, band.upper, in, total, 100.0 * frac, cloud_dev, cloud, sr.incomplete.size());
    return r;
}

CriterionResult tm_contrast(int workers) {
    CriterionResult r{"8", "TM Brewster spike vs TE floor", false, true, "", 0.0};
    const billiards::ConvexDomain dom = billiards::ConvexDomain::disk();
    const double te_floor = sabine::sabine_bounds(dom, reflect::TransparentObstacle{2.0, 1.0}, 4).lower;
    const reflect::TransparentObstacle tm{2.0, 0.4};
    const double xb = reflect::brewster(tm).value();
    disk::ScanOptions opt;
    opt.workers = workers;
    const disk::ScanResult sr = disk::scan(disk::Transparent{2.0, 0.4}, {200.0, 300.0, -8.0, 0.25, 0, -1}, opt);
    int near = 0;
    double top = -INFINITY;
    for (const disk::Resonance& res : sr.resonances) {
        if (std::abs(tm.c * res.tangent_freq - xb) > 0.03) continue;
        ++near;
        top = std::max(top, res.lambda.imag());
    }
    r.pass = near > 0 && top <= 2.0 * te_floor && sr.incomplete.empty();
    r.measured = fmt("xi_B %.5f; %d near-Brewster resonances, max Im %.4f; TE floor %.4f (x2 = %.4f); incomplete cells %zu",
                     xb, near, top, te_floor, 2.0 * te_floor, sr.incomplete.size());
    return r;
}

CriterionResult damping_band(int workers) {
    CriterionResult r{"10", "damping a=2 band", false, true, "", 0.0};
    const billiards::ConvexDomain dom = billiards::ConvexDomain::disk();
    const sabine::SabineBand band = sabine::sabine_bounds(dom, reflect::BoundaryDamping{2.0, {}}, 4);
    disk::ScanOptions opt;
    opt.workers = workers;
    const disk::ScanResult sr = disk::scan(disk::Damping{2.0}, {200.0, 300.0, -3.0, 0.25, 0, -1}, opt);
    int in = 0;
    double lo = INFINITY, hi = -INFINITY;
    for (const disk::Resonance& res : sr.resonances) {
        const double im = res.lambda.imag();
        lo = std::min(lo, im);
        hi = std::max(hi, im);
        if (im >= band.lower - 0.05 && im <= band.upper + 0.05) ++in;
    }
    const int total = static_cast<int>(sr.resonances.size());
    r.pass = total > 0 && in == total && sr.incomplete.empty();
    r.measured = fmt("band [%.5f, %.5f]; %d/%d eigenvalues inside, Im range [%.5f, %.5f]; incomplete cells %zu",
                     band.lower, band.upper, in, total, lo, hi, sr.incomplete.size());
    return r;
}

// ---- 9 ---------------------------------------------------------------------

CriterionResult glancing(double v_exponent, bool gating) {
    CriterionResult r{gating ? "9" : "9x", "", false, gating, "", 0.0};
    r.name = fmt("delta glancing bands, V = (Re lambda)^%.4g%s", v_exponent, gating ? "" : " (diagnostic)");
    const double alpha = -v_exponent;
    const disk::Delta d{1.0, v_exponent};
    const specfun::AiryZeroTable zt = specfun::airy_zeros(4);
    const std::vector<sabine::GlancingBand> bands = sabine::glancing_bands({alpha, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0}, 1e-3, 3);
    const double lo = bands[0].b_min * 0.85, hi = bands[0].b_max * 1.15;
    double rmin = INFINITY, rmax = -INFINITY;
    int count = 0, inside = 0;
    std::vector<double> x, y;
    for (int n : {1000, 1330, 1780, 2370, 3160, 4220, 5620, 7500, 9800}) {
        for (const disk::Resonance& res : disk::glancing_family(d, n, 3)) {
            const double re = res.lambda.real();
            if (re < 1e3 || re > 1e4 || res.tangent_freq < 0.95 || res.tangent_freq > 1.0) continue;
            const double zeta = (n - re) / std::cbrt(n / 2.0);
            int j = 0;
            for (int k = 1; k < 4; ++k) {
                if (std::abs(zt.zeros[k] - zeta) < std::abs(zt.zeros[j] - zeta)) j = k;
            }
            if (j > 2) continue;
            const double ratio = sabine::band_ratio(re, res.lambda.imag(), alpha, zt.im_phi_minus[j]);
            ++count;
            if (ratio >= lo && ratio <= hi) ++inside;
            rmin = std::min(rmin, ratio);
            rmax = std::max(rmax, ratio);
            if (j == 0) {
                x.push_back(std::log(re));
                y.push_back(std::log(-res.lambda.imag()));
            }
        }
    }
    const double slope = x.size() >= 2 ? fit_slope(x, y) : NAN;
    const double want = sabine::band_slope(alpha);
    r.pass = count > 0 && inside == count && std::abs(slope - want) <= 0.05;
    r.measured = fmt("ratio range [%.4f, %.4f] vs [%.4f, %.4f], %d/%d inside; band-1 slope %.4f vs %.4f", rmin,
                     rmax, lo, hi, inside, count, slope, want);
    return r;
}

struct Entry {
    std::function<CriterionResult(int)> run;
    double limit_s;  ///< runtime budget, 0 = none
};

const std::map<std::string, Entry>& table() {
    static const std::map<std::string, Entry> t{
        {"1", {special_functions, 10.0}},
        {"2", {friedlander, 0.0}},
        {"3", {airy_zero_identity, 0.0}},
        {"4", {billiard_suite, 30.0}},
        {"5", {sabine_seed, 0.0}},
        {"6", {fixed_n, 60.0}},
        {"7", {circle_band, 600.0}},
        {"8", {tm_contrast, 0.0}},
        {"9", {[](int) { return glancing(5.0 / 6.0, true); }, 0.0}},
        {"9x", {[](int) { return glancing(1.0, false); }, 0.0}},
        {"10", {damping_band, 0.0}},
    };
    return t;
}

}  // namespace

std::vector<std::string> criterion_ids() { return {"1", "2", "3", "4", "5", "6", "7", "8", "9", "9x", "10"}; }

CriterionResult run_criterion(const std::string& id, int workers) {
    const auto it = table().find(id);
    if (it == table().end()) throw ConfigError("verify: unknown criterion '" + id + "'");
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = it->second.run(workers);
    } catch (const Error& e) {
        r.id = id;
        r.name = "criterion " + id;
        r.pass = false;
        r.gating = id != "9x";
        r.measured = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (it->second.limit_s > 0.0 && r.seconds > it->second.limit_s) {
        r.pass = false;
        r.measured += fmt("; runtime %.1f s over budget %.0f s", r.seconds, it->second.limit_s);
    }
    return r;
}

std::string format_result(const CriterionResult& r) {
    const char* tag = r.pass ? "PASS" : (r.gating ? "FAIL" : "INFO");
    return fmt("%s [%s] %s: %s (%.1f s)", tag, r.id.c_str(), r.name.c_str(), r.measured.c_str(), r.seconds);
}

}  // namespace sabinelab::cli
