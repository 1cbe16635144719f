#include "sabinelab/disk.hpp"

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sabinelab::disk {

namespace {

constexpr double kPi = specfun::kPi;
constexpr int kMaxIter = 50;
constexpr double kStopResidual = 1e-10;
constexpr double kAcceptResidual = 1e-8;

SecularProblem frozen_at(const SecularProblem& problem, double re) {
    if (const auto* d = std::get_if<Delta>(&problem)) return freeze(*d, re);
    return problem;
}

struct Inner {
    cplx z;
    double residual;
    int iterations;
};

Inner iterate(const SecularProblem& pr, int n, cplx start, double eps, std::vector<double>& trace) {
    cplx z = start;
    int large = 0;
    for (int it = 0; it < kMaxIter; ++it) {
        const NormalizedSecular s = secular_normalized(pr, n, z);
        const double res = std::abs(s.f);
        if (!std::isfinite(res) || !std::isfinite(std::abs(s.f_prime))) {
            throw NoConvergence("newton: non-finite secular value", trace);
        }
        if (res < kStopResidual) return {z, res, it};
        if (s.f_prime == cplx(0.0, 0.0)) throw NoConvergence("newton: zero derivative", trace);
        const cplx step = s.f / s.f_prime;
        const double len = std::abs(step);
        trace.push_back(len);
        large = len > eps ? large + 1 : 0;
        if (large >= 3) throw NoConvergence("newton: three consecutive steps beyond trust radius", trace);
        z -= step;
        if (len < 1e-14 * std::max(1.0, std::abs(z))) {
            const double r = std::abs(secular_normalized(pr, n, z).f);
            return {z, r, it + 1};
        }
    }
    throw NoConvergence("newton: iteration cap reached", trace);
}

}  // namespace

const char* seed_name(SeedKind kind) {
    switch (kind) {
        case SeedKind::normal: return "normal";
        case SeedKind::transverse: return "transverse";
        case SeedKind::continuation: return "continuation";
        case SeedKind::subdivision: return "subdivision";
        case SeedKind::glancing: return "glancing";
        case SeedKind::user: break;
    }
    return "user";
}

NewtonGuard newton_guard(const SecularProblem& problem, int n, cplx lambda0, double eps) {
    if (!(eps > 0.0)) throw ConfigError("newton_guard: eps must be > 0");
    const SecularProblem pr = frozen_at(problem, lambda0.real());
    const NormalizedSecular s0 = secular_normalized(pr, n, lambda0);
    // f' at z in units of the scale at lambda0, which keeps f analytic
    auto fprime = [&](cplx z) {
        const NormalizedSecular s = secular_normalized(pr, n, z);
        return s.f_prime * std::exp(s.log_scale - s0.log_scale);
    };
    NewtonGuard g;
    g.eps = eps;
    g.a = std::abs(s0.f);
    g.b = std::abs(s0.f_prime);
    const double delta = 1e-3 * eps;
    for (int k = 0; k < 8; ++k) {
        const cplx z = lambda0 + std::polar(eps, 2.0 * kPi * k / 8.0);
        const cplx d2 = (fprime(z + delta) - fprime(z - delta)) / (2.0 * delta);
        g.d = std::max(g.d, std::abs(d2));
    }
    g.pass = g.a + g.d * eps * eps < eps * g.b && eps * g.b < 1.0;
    return g;
}

Resonance newton_refine(const SecularProblem& problem, int n, cplx lambda0, double eps,
                        SeedKind seed) {
    if (!(eps > 0.0)) throw ConfigError("newton_refine: eps must be > 0");
    if (!std::isfinite(lambda0.real()) || !std::isfinite(lambda0.imag())) {
        throw ConfigError("newton_refine: non-finite seed");
    }
    Resonance out;
    out.n = n;
    out.seed = seed;
    out.problem = problem_name(problem);
    // any radius inside the trust disk that satisfies the lemma will do
    for (double r = eps; !out.guarded; r *= 0.25) {
        const NewtonGuard g = newton_guard(problem, n, lambda0, r);
        out.guarded = g.pass;
        if (r * g.b < 2.0 * g.a || r < 1e-8 * eps) break;
    }

    std::vector<double> trace;
    Inner r{lambda0, 0.0, 0};
    if (std::holds_alternative<Delta>(problem)) {
        cplx prev = lambda0;
        int total = 0;
        for (int pass = 0; pass < 20; ++pass) {
            r = iterate(frozen_at(problem, prev.real()), n, prev, eps, trace);
            total += r.iterations;
            if (std::abs(r.z - prev) <= 1e-13 * std::abs(r.z)) break;
            prev = r.z;
        }
        r.iterations = total;
    } else {
        r = iterate(problem, n, lambda0, eps, trace);
    }
    if (std::abs(r.z - lambda0) >= eps) {
        throw NoConvergence("newton: limit left the trust disk", trace);
    }
    if (!(r.residual < kAcceptResidual)) {
        std::ostringstream os;
        os << "newton: stalled at residual " << r.residual;
        throw NoConvergence(os.str(), trace);
    }
    out.lambda = r.z;
    out.residual = r.residual;
    out.iterations = r.iterations;
    out.tangent_freq = n / r.z.real();
    return out;
}

std::vector<Resonance> glancing_family(const Delta& problem, int n, int j_max) {
    if (n < 1) throw ConfigError("glancing_family: n must be >= 1");
    const specfun::AiryZeroTable zt = specfun::airy_zeros(j_max);
    const double scale = std::cbrt(n / 2.0);
    std::vector<Resonance> out;
    for (int j = 0; j < j_max; ++j) {
        const double re0 = n - zt.zeros[j] * scale;
        const double h = 1.0 / re0;
        const double hv = h * problem.potential(cplx(re0, 0.0));
        const double im0 = std::clamp(std::cbrt(2.0 * h) * zt.im_phi_minus[j] / (hv * hv), -10.0, -1e-3);
        try {
            Resonance r = newton_refine(problem, n, cplx(re0, im0), 0.5 * scale, SeedKind::glancing);
            const bool dup = std::any_of(out.begin(), out.end(), [&](const Resonance& o) {
                return std::abs(o.lambda - r.lambda) <= 1e-6;
            });
            if (!dup && r.lambda.imag() < 0.0) out.push_back(std::move(r));
        } catch (const NoConvergence&) {
        }
    }
    std::sort(out.begin(), out.end(),
              [](const Resonance& a, const Resonance& b) { return a.lambda.real() < b.lambda.real(); });
    return out;
}

}  // namespace sabinelab::disk
