#include "sabinelab/disk.hpp"

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <sstream>

namespace sabinelab::disk {

namespace {

constexpr double kPi = specfun::kPi;
constexpr double kLogRange = 700.0;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// second derivative from Bessel's equation
cplx bessel_second(int n, cplx z, cplx w, cplx wp) {
    const double nn = static_cast<double>(n) * n;
    return -wp / z - (1.0 - nn / (z * z)) * w;
}

// log(e^x + e^y)
double log_add(double x, double y) {
    const double hi = std::max(x, y), lo = std::min(x, y);
    if (lo == -INFINITY) return hi;
    return hi + std::log1p(std::exp(lo - hi));
}

NormalizedSecular transparent(const Transparent& p, int n, cplx lambda) {
    const double ci = 1.0 / p.c;
    const cplx x = lambda * ci;
    const specfun::ScaledBesselQuad in = specfun::bessel_j_scaled(n, x);
    const specfun::ScaledBesselQuad out = specfun::bessel_quad_scaled(n, lambda);
    const cplx jpp = bessel_second(n, x, in.j, in.j_prime);
    const cplx hpp = bessel_second(n, lambda, out.h1, out.h1_prime);

    const cplx t1 = ci * in.j_prime * out.h1;
    const cplx t2 = p.alpha * out.h1_prime * in.j;
    const double s = std::abs(t1) + std::abs(t2);
    if (!(s > 0.0)) throw NumericalError("secular: transparent scale vanished");
    NormalizedSecular r;
    r.f = (t1 - t2) / s;
    r.f_prime = (ci * ci * jpp * out.h1 + ci * in.j_prime * out.h1_prime -
                 p.alpha * hpp * in.j - p.alpha * out.h1_prime * ci * in.j_prime) /
                s;
    r.log_scale = in.log_j + out.log_h + std::log(s);
    return r;
}

NormalizedSecular delta(const Delta& p, int n, cplx lambda) {
    const double v = p.potential(lambda);
    const specfun::ScaledBesselQuad q = specfun::bessel_quad_scaled(n, lambda);
    const cplx jh = q.j * q.h1;
    const cplx jhp = q.j_prime * q.h1 + q.j * q.h1_prime;
    const double l_prod = q.log_j + q.log_h;
    const double l_jh = std::abs(jh) > 0.0 ? l_prod + std::log(std::abs(jh)) : -INFINITY;
    const double l_const = std::log(2.0 / (kPi * std::abs(v)));
    const double ls = log_add(l_jh, l_const);
    const double e = std::exp(l_prod - ls);
    NormalizedSecular r;
    r.f = jh * e - cplx(0.0, 2.0 / (kPi * v)) * std::exp(-ls);
    r.f_prime = jhp * e;
    r.log_scale = ls;
    return r;
}

NormalizedSecular damping(const Damping& p, int n, cplx lambda) {
    const specfun::ScaledBesselQuad q = specfun::bessel_j_scaled(n, lambda);
    const cplx jpp = bessel_second(n, lambda, q.j, q.j_prime);
    const cplx ia(0.0, p.a);
    const double s = std::abs(q.j_prime) + p.a * std::abs(q.j);
    if (!(s > 0.0)) throw NumericalError("secular: damping scale vanished");
    NormalizedSecular r;
    r.f = (q.j_prime - ia * q.j) / s;
    r.f_prime = (jpp - ia * q.j_prime) / s;
    r.log_scale = q.log_j + std::log(s);
    return r;
}

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

double Delta::potential(cplx lambda) const {
    if (v_exponent == 0.0) return v_coef;
    if (!(lambda.real() > 0.0)) throw ConfigError("delta: V(lambda) needs Re lambda > 0");
    return v_coef * std::pow(lambda.real(), v_exponent);
}

Delta freeze(const Delta& d, double re) { return Delta{d.potential(cplx(re, 0.0)), 0.0}; }

void validate(const SecularProblem& problem) {
    std::visit(overloaded{
                   [](const Transparent& p) {
                       if (!(p.c > 0.0) || p.c == 1.0) {
                           throw ConfigError("transparent: c must be > 0 and != 1");
                       }
                       if (!(p.alpha > 0.0)) throw ConfigError("transparent: alpha must be > 0");
                   },
                   [](const Delta& p) {
                       if (!(p.v_coef > 0.0)) throw ConfigError("delta: V coefficient must be > 0");
                       if (!std::isfinite(p.v_exponent)) {
                           throw ConfigError("delta: v-exponent must be finite");
                       }
                   },
                   [](const Damping& p) {
                       if (!(p.a > 0.0)) throw ConfigError("damping: a must be > 0");
                   },
               },
               problem);
}

std::string problem_name(const SecularProblem& problem) {
    switch (problem.index()) {
        case 0: return "transparent";
        case 1: return "delta";
        default: return "damping";
    }
}

NormalizedSecular secular_normalized(const SecularProblem& problem, int n, cplx lambda) {
    return std::visit(
        overloaded{
            [&](const Transparent& p) { return transparent(p, n, lambda); },
            [&](const Delta& p) { return delta(p, n, lambda); },
            [&](const Damping& p) { return damping(p, n, lambda); },
        },
        problem);
}

SecularValue secular(const SecularProblem& problem, int n, cplx lambda) {
    const NormalizedSecular s = secular_normalized(problem, n, lambda);
    if (std::abs(s.log_scale) > kLogRange) {
        throw ScaledOverflow("secular: f outside double range", s.log_scale);
    }
    const double e = std::exp(s.log_scale);
    return {s.f * e, s.f_prime * e};
}

// ---- seeds -------------------------------------------------------------

cplx seed_normal(const Transparent& p, int n, int k) {
    const double ac = p.alpha * p.c;
    if (ac == 1.0) throw ConfigError("seed_normal: alpha c = 1 has no normal family");
    const double im = 0.5 * p.c * std::log(std::abs((1.0 - ac) / (1.0 + ac)));
    const double re = p.c * (2.0 - sgn(1.0 - ac) + 2.0 * n + 4.0 * k) * kPi / 4.0;
    return {re, im};
}

namespace {

double g_branch(const Transparent& p, double s, int qm, int pm, double sg) {
    const double a = std::sqrt(std::max(0.0, s * s / (p.c * p.c) - 1.0));
    return a - std::acos(p.c / s) + kPi * pm / qm - sg * kPi / (4.0 * qm);
}

double g_sign(const Transparent& p, double s) {
    const double a = std::sqrt(std::max(0.0, s * s / (p.c * p.c) - 1.0));
    const double b = p.alpha * std::sqrt(std::max(0.0, s * s - 1.0));
    return sgn(a - b);
}

}  // namespace

double transverse_g(const Transparent& p, double s, int qm, int pm) {
    if (qm <= 0) throw ConfigError("transverse_g: qm must be positive");
    if (!(s >= std::max(1.0, p.c))) throw ConfigError("transverse_g: s must be >= max(1, c)");
    return g_branch(p, s, qm, pm, g_sign(p, s));
}

std::vector<double> transverse_roots(const Transparent& p, int n, int k) {
    if (n <= 0) throw ConfigError("transverse_roots: n must be positive");
    const double s0 = std::max(1.0, p.c);
    std::vector<double> cuts{s0 * (1.0 + 1e-13)};
    // sqrt(c^-2 s^2 - 1) = alpha sqrt(s^2 - 1)
    const double den = 1.0 / (p.c * p.c) - p.alpha * p.alpha;
    if (den != 0.0) {
        const double sb2 = (1.0 - p.alpha * p.alpha) / den;
        if (sb2 > s0 * s0) cuts.push_back(std::sqrt(sb2));
    }
    std::vector<double> roots;
    for (std::size_t i = 0; i < cuts.size(); ++i) {
        const double lo = i == 0 ? cuts[0] : cuts[i] * (1.0 + 1e-13);
        const double mid_hint = i + 1 < cuts.size() ? 0.5 * (lo + cuts[i + 1]) : 2.0 * lo;
        const double sg = g_sign(p, mid_hint);
        auto g = [&](double s) { return g_branch(p, s, n, k, sg); };
        double hi;
        if (i + 1 < cuts.size()) {
            hi = cuts[i + 1] * (1.0 - 1e-13);
        } else {
            hi = 2.0 * lo + 1.0;
            while (g(hi) <= 0.0 && hi < 1e9) hi *= 2.0;
        }
        const double ga = g(lo), gb = g(hi);
        if (!(ga < 0.0 && gb > 0.0)) continue;
        std::uintmax_t it = 200;
        const auto br = boost::math::tools::toms748_solve(
            g, lo, hi, ga, gb, boost::math::tools::eps_tolerance<double>(46), it);
        roots.push_back(0.5 * (br.first + br.second));
    }
    return roots;
}

cplx transverse_lambda(const Transparent& p, int n, double r) {
    const double a = std::sqrt(r * r / (p.c * p.c) - 1.0);
    const double b = p.alpha * std::sqrt(r * r - 1.0);
    const double im = r / (2.0 * a) * std::log(std::abs((a - b) / (a + b)));
    return {n * r, im};
}

TransverseSeed seed_transverse(const Transparent& p, int pp, int q, int m) {
    if (q <= 0 || m <= 0) throw ConfigError("seed_transverse: q and m must be positive");
    const int n = m * q;
    const std::vector<double> roots = transverse_roots(p, n, pp * m);
    if (roots.empty()) {
        std::ostringstream os;
        os << "seed_transverse: g has no root for p/q = " << pp << "/" << q
           << " (needs p/q < 0 so that g changes sign above max(1, c))";
        throw ConfigError(os.str());
    }
    return {transverse_lambda(p, n, roots.front()), n, roots.front()};
}

}  // namespace sabinelab::disk
