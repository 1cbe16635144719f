#include "sabinelab/sabine.hpp"

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

namespace sabinelab::sabine {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool disk_like(const ConvexDomain& d) { return d.max_curvature() - d.min_curvature() < 1e-14; }

// Orbit quotients with a Brewster window: entry N-1 is NaN once an orbit
// point falls within `window` of a transmission zero.
std::vector<double> windowed_quotients(const ConvexDomain& domain, const ReflectivityModel& model,
                                       PhasePoint q, int n_max, double window) {
    const double c = reflect::wave_speed(model);
    std::vector<double> out(n_max, std::numeric_limits<double>::quiet_NaN());
    double sum_log = 0.0, sum_len = 0.0;
    PhasePoint p = q;
    for (int k = 1; k <= n_max; ++k) {
        const billiards::StepResult st = billiards::billiard_step(domain, p);
        p = st.next;
        sum_len += st.chord;
        if (window > 0.0) {
            const auto z = reflect::transmission_zero(model, p.s);
            if (z && std::abs(std::abs(p.xi) - *z) < window) break;
        }
        const reflect::LogReflectivity lr = reflect::log_reflectivity(model, p.xi, p.s);
        if (lr.total_transmission) break;
        sum_log += lr.value;
        out[k - 1] = (sum_log / k) / (2.0 / c * (sum_len / k));
    }
    return out;
}

struct Sample {
    PhasePoint q;
    std::vector<double> quot;
};

template <class F>
void parallel_for(int n, int workers, F&& f) {
    if (workers <= 0) workers = int(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, std::max(1, n / 16));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < n; i += workers) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<NExtrema> extrema_on_grid(const ConvexDomain& domain, const ReflectivityModel& model,
                                      int n_max, int xi_points, int footpoints, bool symmetric,
                                      const GridSpec& grid) {
    const double top = 1.0 - grid.collar;
    const double bottom = symmetric ? 0.0 : -top;
    const int total = xi_points * footpoints;
    std::vector<Sample> samples(total);
    const double L = domain.perimeter();
    parallel_for(total, grid.workers, [&](int idx) {
        const int i = idx % xi_points, f = idx / xi_points;
        const double xi = bottom + (top - bottom) * i / (xi_points - 1);
        const double s = L * f / footpoints;
        samples[idx].q = {s, xi};
        samples[idx].quot = windowed_quotients(domain, model, {s, xi}, n_max, grid.brewster_half_width);
    });
    std::vector<NExtrema> ex(n_max);
    for (int n = 1; n <= n_max; ++n) {
        NExtrema& e = ex[n - 1];
        e.n = n;
        e.min = kInf;
        e.max = -kInf;
        for (const Sample& sm : samples) {
            const double v = sm.quot[n - 1];
            if (std::isnan(v)) continue;
            if (v < e.min) {
                e.min = v;
                e.argmin = sm.q;
            }
            if (v > e.max) {
                e.max = v;
                e.argmax = sm.q;
            }
        }
        if (!std::isfinite(e.min)) {
            throw ConfigError("sabine_bounds: Brewster window excludes every grid point at N = " +
                              std::to_string(n));
        }
    }
    return ex;
}

// Golden-section polish of an extremum in xi at fixed footpoint.
void polish(const ConvexDomain& domain, const ReflectivityModel& model, NExtrema& e, double cell,
            double top, double bottom, double window) {
    auto value = [&](double s, double xi) {
        const auto v = windowed_quotients(domain, model, {s, xi}, e.n, window);
        return v[e.n - 1];
    };
    auto run = [&](PhasePoint& at, double& best, bool maximize) {
        double a = std::max(bottom, at.xi - cell), b = std::min(top, at.xi + cell);
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 40 && b - a > 1e-10; ++it) {
            const double x1 = b - g * (b - a), x2 = a + g * (b - a);
            double f1 = value(at.s, x1), f2 = value(at.s, x2);
            if (std::isnan(f1)) f1 = maximize ? -kInf : kInf;
            if (std::isnan(f2)) f2 = maximize ? -kInf : kInf;
            const bool left = maximize ? (f1 > f2) : (f1 < f2);
            if (left) {
                b = x2;
            } else {
                a = x1;
            }
        }
        const double xm = 0.5 * (a + b);
        const double v = value(at.s, xm);
        if (!std::isnan(v) && (maximize ? v > best : v < best)) {
            best = v;
            at.xi = xm;
        }
    };
    run(e.argmin, e.min, false);
    run(e.argmax, e.max, true);
}

}  // namespace

std::vector<Quotient> sabine_quotients(const ConvexDomain& domain, const ReflectivityModel& model,
                                       PhasePoint q, int n_max) {
    if (n_max < 1) throw ConfigError("sabine_quotient: N must be >= 1");
    reflect::validate(model);
    const double c = reflect::wave_speed(model);
    std::vector<Quotient> out(n_max);
    double sum_log = 0.0, sum_len = 0.0;
    bool dead = false;
    PhasePoint p = q;
    for (int k = 1; k <= n_max; ++k) {
        const billiards::StepResult st = billiards::billiard_step(domain, p);
        p = st.next;
        sum_len += st.chord;
        const reflect::LogReflectivity lr = reflect::log_reflectivity(model, p.xi, p.s);
        dead = dead || lr.total_transmission;
        if (dead) {
            out[k - 1] = {-kInf, true};
            continue;
        }
        sum_log += lr.value;
        out[k - 1] = {(sum_log / k) / (2.0 / c * (sum_len / k)), false};
    }
    return out;
}

Quotient sabine_quotient(const ConvexDomain& domain, const ReflectivityModel& model, PhasePoint q,
                         int n) {
    return sabine_quotients(domain, model, q, n).back();
}

double theorem_collar(double h, double eps) { return std::pow(h, eps); }

SabineBand sabine_bounds(const ConvexDomain& domain, const ReflectivityModel& model, int n_max,
                         const GridSpec& grid) {
    reflect::validate(model);
    if (n_max < 1) throw ConfigError("sabine_bounds: n_max must be >= 1");
    if (!(grid.collar > 0.0 && grid.collar < 1.0)) {
        throw ConfigError("sabine_bounds: collar must lie in (0, 1)");
    }
    if (grid.points < 3) throw ConfigError("sabine_bounds: need at least 3 grid points");
    const bool disk = disk_like(domain);
    const int footpoints = grid.footpoints > 0 ? grid.footpoints : (disk ? 1 : 48);

    int pts = grid.points;
    std::vector<NExtrema> ex = extrema_on_grid(domain, model, n_max, pts, footpoints, disk, grid);
    for (int d = 0; d < grid.max_doublings; ++d) {
        const int finer = 2 * pts - 1;
        std::vector<NExtrema> ex2 = extrema_on_grid(domain, model, n_max, finer, footpoints, disk, grid);
        double change = 0.0;
        for (int n = 0; n < n_max; ++n) {
            change = std::max(change, std::abs(ex2[n].min - ex[n].min));
            change = std::max(change, std::abs(ex2[n].max - ex[n].max));
        }
        ex = std::move(ex2);
        pts = finer;
        if (change < grid.refine_tol) break;
    }

    const double top = 1.0 - grid.collar;
    const double bottom = disk ? 0.0 : -top;
    const double cell = (top - bottom) / (pts - 1);
    for (auto& e : ex) polish(domain, model, e, cell, top, bottom, grid.brewster_half_width);

    SabineBand band;
    band.n_max = n_max;
    band.xi_points = pts;
    band.footpoints = footpoints;
    band.collar = grid.collar;
    band.wave_speed = reflect::wave_speed(model);
    band.lower = -kInf;
    band.upper = kInf;
    for (const auto& e : ex) {
        band.lower = std::max(band.lower, e.min);
        band.upper = std::min(band.upper, e.max);
    }
    band.per_n = std::move(ex);
    for (const auto& e : band.per_n) {
        if (!(e.min <= band.lower && band.upper <= e.max)) {
            throw NumericalError("sabine_bounds: bracketing invariant violated");
        }
    }
    return band;
}

double glancing_limit(const ConvexDomain& domain, const reflect::TransparentObstacle& model,
                      double s) {
    reflect::validate(model);
    if (model.c < 1.0) return 0.0;
    const double kappa = domain.curvature(s);
    return model.c * (-kappa / (model.alpha * std::sqrt(model.c * model.c - 1.0)));
}

Extrapolation glancing_extrapolation(const ConvexDomain& domain, const ReflectivityModel& model,
                                     double s) {
    std::vector<double> eta, val;
    for (int k = 2; k <= 6; ++k) {
        const double e = std::pow(10.0, -k);
        const Quotient qv = sabine_quotient(domain, model, {s, 1.0 - e}, 1);
        eta.push_back(std::sqrt(e * (2.0 - e)));
        val.push_back(qv.value);
    }
    // linear Richardson in eta on successive pairs
    std::vector<double> rich;
    for (std::size_t i = 0; i + 1 < eta.size(); ++i) {
        rich.push_back((eta[i] * val[i + 1] - eta[i + 1] * val[i]) / (eta[i] - eta[i + 1]));
    }
    Extrapolation out;
    out.estimate = rich.back();
    out.error = std::abs(rich.back() - rich[rich.size() - 2]) + 1e-12;
    return out;
}

double predicted_im_lambda(const GlancingInput& in, double im_phi, double h, double q, double v0) {
    const double hs = std::pow(h, 1.0 + in.alpha_exp) * v0;
    return q / (hs * hs) * (std::cbrt(2.0 * h * q) * (1.0 + in.a1) * im_phi + in.im_v1);
}

std::vector<GlancingBand> glancing_bands(const GlancingInput& in, double h, int m_bands) {
    if (!(h > 0.0)) throw ConfigError("glancing_bands: h must be > 0");
    if (m_bands < 1 || m_bands > 99) throw ConfigError("glancing_bands: m_bands must lie in [1, 99]");
    if (!(in.q_min > 0.0 && in.q_max >= in.q_min)) throw ConfigError("glancing_bands: bad Q range");
    if (!(in.v0_min > 0.0 && in.v0_max >= in.v0_min)) throw ConfigError("glancing_bands: bad v0 range");
    const specfun::AiryZeroTable zt = specfun::airy_zeros(m_bands + 1);
    const double c13 = std::cbrt(2.0);
    const double b_min = c13 * std::pow(in.q_min, 4.0 / 3.0) / (in.v0_max * in.v0_max);
    const double b_max = c13 * std::pow(in.q_max, 4.0 / 3.0) / (in.v0_min * in.v0_min);
    std::vector<GlancingBand> out;
    for (int j = 1; j <= m_bands; ++j) {
        GlancingBand b;
        b.j = j;
        b.zeta_j = zt.zeros[j - 1];
        b.im_phi = zt.im_phi_minus[j - 1];
        b.b_min = b_min;
        b.b_max = b_max;
        b.im_lambda_min = kInf;
        b.im_lambda_max = -kInf;
        const int nq = (in.q_max > in.q_min) ? 65 : 1;
        for (int iq = 0; iq < nq; ++iq) {
            const double q = nq == 1 ? in.q_min : in.q_min + (in.q_max - in.q_min) * iq / (nq - 1);
            for (double v0 : {in.v0_min, in.v0_max}) {
                const double v = predicted_im_lambda(in, b.im_phi, h, q, v0);
                b.im_lambda_min = std::min(b.im_lambda_min, v);
                b.im_lambda_max = std::max(b.im_lambda_max, v);
            }
        }
        b.gap_below = b_min / b_max > b.im_phi / zt.im_phi_minus[j];
        out.push_back(b);
    }
    return out;
}

double band_slope(double alpha_exp) { return 2.0 + 2.0 * alpha_exp - 1.0 / 3.0; }

double band_ratio(double re_lambda, double im_lambda, double alpha_exp, double im_phi) {
    return im_lambda / (std::pow(re_lambda, band_slope(alpha_exp)) * im_phi);
}

}  // namespace sabinelab::sabine
