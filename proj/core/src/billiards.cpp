#include "sabinelab/billiards.hpp"

#include "sabinelab/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace sabinelab::billiards {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;
constexpr double kGlancingCut = 1e-12;
constexpr int kPanels = 512;
constexpr int kCurvatureSamples = 4096;

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }
Vec2 sub(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }

double wrap(double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0) r += period;
    return r;
}

}  // namespace

struct ConvexDomain::Impl {
    bool analytic_disk = false;
    double radius = 1.0;
    std::function<Vec2(double)> x, dx, ddx;  // curve parameter u in [0, 2pi)
    std::vector<double> cum;                 // arclength at panel starts
    double length = 0.0;
    double kmin = 0.0, kmax = 0.0, s_kmin = 0.0, s_kmax = 0.0;

    double speed(double u) const { return norm(dx(u)); }

    double panel_integral(double a, double b) const {
        using Q = boost::math::quadrature::gauss<double, 20>;
        return Q::integrate([this](double u) { return speed(u); }, a, b);
    }

    void build_table() {
        cum.assign(kPanels + 1, 0.0);
        const double h = kTwoPi / kPanels;
        for (int k = 0; k < kPanels; ++k) cum[k + 1] = cum[k] + panel_integral(k * h, (k + 1) * h);
        length = cum[kPanels];
    }

    double s_of_u(double u) const {
        if (analytic_disk) return wrap(radius * u, length);
        const double uw = wrap(u, kTwoPi);
        const double h = kTwoPi / kPanels;
        const int k = std::min(kPanels - 1, int(uw / h));
        return cum[k] + panel_integral(k * h, uw);
    }

    double u_of_s(double s) const {
        const double sw = wrap(s, length);
        if (analytic_disk) return sw / radius;
        const auto it = std::upper_bound(cum.begin(), cum.end(), sw);
        const int k = std::clamp(int(it - cum.begin()) - 1, 0, kPanels - 1);
        const double h = kTwoPi / kPanels;
        double u = k * h + h * (sw - cum[k]) / (cum[k + 1] - cum[k]);
        for (int it2 = 0; it2 < 8; ++it2) {
            const double du = (cum[k] + panel_integral(k * h, u) - sw) / speed(u);
            u -= du;
            if (std::abs(du) < 1e-15) break;
        }
        return u;
    }

    Vec2 unit_tangent(double u) const {
        const Vec2 d = dx(u);
        const double n = norm(d);
        return {d.x / n, d.y / n};
    }

    double curvature_u(double u) const {
        const Vec2 d = dx(u), dd = ddx(u);
        const double n = norm(d);
        return cross(d, dd) / (n * n * n);
    }

    void survey_curvature() {
        kmin = std::numeric_limits<double>::infinity();
        kmax = -kmin;
        for (int i = 0; i < kCurvatureSamples; ++i) {
            const double u = kTwoPi * i / kCurvatureSamples;
            const double k = curvature_u(u);
            if (k < kmin) {
                kmin = k;
                s_kmin = s_of_u(u);
            }
            if (k > kmax) {
                kmax = k;
                s_kmax = s_of_u(u);
            }
        }
        if (!(kmin > 0.0)) throw ConfigError("ConvexDomain: curvature must be strictly positive");
    }
};

ConvexDomain ConvexDomain::disk(double radius) {
    if (!(radius > 0.0)) throw ConfigError("disk: radius must be positive");
    auto impl = std::make_shared<Impl>();
    impl->analytic_disk = true;
    impl->radius = radius;
    impl->x = [radius](double u) { return Vec2{radius * std::cos(u), radius * std::sin(u)}; };
    impl->dx = [radius](double u) { return Vec2{-radius * std::sin(u), radius * std::cos(u)}; };
    impl->ddx = [radius](double u) { return Vec2{-radius * std::cos(u), -radius * std::sin(u)}; };
    impl->length = kTwoPi * radius;
    impl->kmin = impl->kmax = 1.0 / radius;
    return ConvexDomain(std::move(impl));
}

ConvexDomain ConvexDomain::ellipse(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw ConfigError("ellipse: semi-axes must be positive");
    auto impl = std::make_shared<Impl>();
    impl->x = [a, b](double u) { return Vec2{a * std::cos(u), b * std::sin(u)}; };
    impl->dx = [a, b](double u) { return Vec2{-a * std::sin(u), b * std::cos(u)}; };
    impl->ddx = [a, b](double u) { return Vec2{-a * std::cos(u), -b * std::sin(u)}; };
    impl->build_table();
    impl->survey_curvature();
    return ConvexDomain(std::move(impl));
}

ConvexDomain ConvexDomain::from_support_function(std::function<double(double)> p,
                                                 std::function<double(double)> dp,
                                                 std::function<double(double)> ddp) {
    auto impl = std::make_shared<Impl>();
    // x = p n + p' n_perp, x' = rho n_perp, x'' = rho' n_perp - rho n, rho = p + p''
    impl->x = [p, dp](double t) {
        const double c = std::cos(t), s = std::sin(t), pv = p(t), dv = dp(t);
        return Vec2{pv * c - dv * s, pv * s + dv * c};
    };
    impl->dx = [p, ddp](double t) {
        const double rho = p(t) + ddp(t);
        return Vec2{-rho * std::sin(t), rho * std::cos(t)};
    };
    impl->ddx = [p, dp, ddp](double t) {
        // rho' by a centered difference; only curvature uses it
        const double e = 1e-6;
        const double rho = p(t) + ddp(t);
        const double drho = (p(t + e) + ddp(t + e) - p(t - e) - ddp(t - e)) / (2 * e);
        const double c = std::cos(t), s = std::sin(t);
        return Vec2{-drho * s - rho * c, drho * c - rho * s};
    };
    for (int i = 0; i < kCurvatureSamples; ++i) {
        const double t = kTwoPi * i / kCurvatureSamples;
        if (!(p(t) + ddp(t) > 0.0)) {
            throw ConfigError("from_support_function: p + p'' must be positive");
        }
    }
    impl->build_table();
    impl->survey_curvature();
    return ConvexDomain(std::move(impl));
}

double ConvexDomain::perimeter() const { return impl_->length; }
Vec2 ConvexDomain::point(double s) const { return impl_->x(impl_->u_of_s(s)); }
Vec2 ConvexDomain::tangent(double s) const { return impl_->unit_tangent(impl_->u_of_s(s)); }
Vec2 ConvexDomain::normal(double s) const {
    const Vec2 t = tangent(s);
    return {-t.y, t.x};
}
double ConvexDomain::curvature(double s) const { return impl_->curvature_u(impl_->u_of_s(s)); }
double ConvexDomain::min_curvature() const { return impl_->kmin; }
double ConvexDomain::max_curvature() const { return impl_->kmax; }
double ConvexDomain::argmax_curvature() const { return impl_->s_kmax; }
double ConvexDomain::argmin_curvature() const { return impl_->s_kmin; }

StepResult billiard_step(const ConvexDomain& domain, PhasePoint q) {
    if (!(std::abs(q.xi) < 1.0 - kGlancingCut)) {
        throw GlancingError("billiard_step: |xi| >= 1 - 1e-12 (glancing)");
    }
    const auto& d = domain.impl();
    const double u0 = d.u_of_s(q.s);
    const Vec2 x = d.x(u0);
    const Vec2 t = d.unit_tangent(u0);
    const Vec2 n{-t.y, t.x};
    const double eta = std::sqrt((1.0 - q.xi) * (1.0 + q.xi));
    const Vec2 v{q.xi * t.x + eta * n.x, q.xi * t.y + eta * n.y};

    auto g = [&](double u) { return cross(v, sub(d.x(u), x)); };
    const double delta = kTwoPi * 1e-9;
    double a = u0 + delta, b = u0 + kTwoPi - delta;
    const double ga = g(a), gb = g(b);
    if (!(ga < 0.0 && gb > 0.0)) {
        throw NumericalError("billiard_step: ray does not cross the boundary exactly once");
    }
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        g, a, b, ga, gb, boost::math::tools::eps_tolerance<double>(50), iters);
    const double u1 = 0.5 * (r.first + r.second);
    const Vec2 y = d.x(u1);
    const Vec2 t1 = d.unit_tangent(u1);
    StepResult out;
    out.next.s = d.s_of_u(u1);
    out.next.xi = dot(v, t1);
    out.chord = norm(sub(y, x));
    return out;
}

OrbitSegment orbit(const ConvexDomain& domain, PhasePoint q, int n) {
    if (n < 1) throw ConfigError("orbit: N must be >= 1");
    OrbitSegment o;
    o.points.reserve(n + 1);
    o.chords.reserve(n);
    o.points.push_back(q);
    for (int k = 0; k < n; ++k) {
        const StepResult r = billiard_step(domain, o.points.back());
        o.points.push_back(r.next);
        o.chords.push_back(r.chord);
    }
    return o;
}

double mean_chord(const OrbitSegment& orbit) {
    if (orbit.chords.empty()) throw ConfigError("mean_chord: empty orbit");
    double s = 0.0;
    for (double c : orbit.chords) s += c;
    return s / double(orbit.chords.size());
}

void write_orbit_csv(std::ostream& os, const OrbitSegment& orbit) {
    os << "k,s,xi,chord\n";
    os.precision(17);
    for (std::size_t k = 0; k < orbit.points.size(); ++k) {
        os << k << ',' << orbit.points[k].s << ',' << orbit.points[k].xi << ',';
        if (k > 0) os << orbit.chords[k - 1];
        os << '\n';
    }
}

GlancingReport glancing_expansion_check(const ConvexDomain& domain, double s,
                                        std::vector<double> one_minus_xi) {
    if (one_minus_xi.empty()) {
        for (int i = 0; i <= 12; ++i) one_minus_xi.push_back(std::pow(10.0, -1.0 - 0.25 * i));
    }
    GlancingReport rep;
    rep.one_minus_xi = one_minus_xi;
    const double kappa = domain.curvature(s);
    std::vector<double> lx, ln, lc;
    for (double e : one_minus_xi) {
        const double xi = 1.0 - e;
        const double eta = std::sqrt(e * (2.0 - e));
        const StepResult r = billiard_step(domain, {s, xi});
        const double xi1 = r.next.xi;
        const double eta1 = std::sqrt((1.0 - xi1) * (1.0 + xi1));
        rep.normal_remainder.push_back(std::abs(eta1 - eta));
        rep.chord_remainder.push_back(std::abs(r.chord - 2.0 / kappa * eta));
        lx.push_back(std::log(e * (2.0 - e)));
    }
    // least-squares slope, or +inf when the remainder is rounding noise
    auto slope = [&](const std::vector<double>& rem) {
        double mx = 0, my = 0;
        const int m = int(rem.size());
        bool all_tiny = true;
        std::vector<double> ly(m);
        for (int i = 0; i < m; ++i) {
            if (rem[i] > 1e-12) all_tiny = false;
            ly[i] = std::log(std::max(rem[i], 1e-300));
            mx += lx[i];
            my += ly[i];
        }
        if (all_tiny) return std::numeric_limits<double>::infinity();
        mx /= m;
        my /= m;
        double sxy = 0, sxx = 0;
        for (int i = 0; i < m; ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        return sxy / sxx;
    };
    rep.normal_exponent = slope(rep.normal_remainder);
    rep.chord_exponent = slope(rep.chord_remainder);
    return rep;
}

double jacobian_determinant(const ConvexDomain& domain, PhasePoint q, double step) {
    const double L = domain.perimeter();
    auto f = [&](double s, double xi) { return billiard_step(domain, {s, xi}).next; };
    const PhasePoint sp = f(q.s + step, q.xi), sm = f(q.s - step, q.xi);
    const PhasePoint xp = f(q.s, q.xi + step), xm = f(q.s, q.xi - step);
    auto ds = [L](double a, double b) {
        double d = a - b;
        d -= L * std::round(d / L);
        return d;
    };
    const double a11 = ds(sp.s, sm.s) / (2 * step);
    const double a12 = ds(xp.s, xm.s) / (2 * step);
    const double a21 = (sp.xi - sm.xi) / (2 * step);
    const double a22 = (xp.xi - xm.xi) / (2 * step);
    return a11 * a22 - a12 * a21;
}

}  // namespace sabinelab::billiards
