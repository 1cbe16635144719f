// Airy functions of complex argument.
//
// Three regions: Maclaurin series on |z| <= 2.5, the Poincare expansion in
// eta = (2/3) z^{3/2} on |z| >= 9, and Taylor stepping of Ai'' = z Ai in the
// annulus between.  Outside |arg z| <= 2pi/3 the expansion is reached through
// Ai(z) = -w Ai(wz) - conj(w) Ai(conj(w) z).

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sabinelab::specfun {

namespace {

constexpr double kAi0 = 0.355028053887817239260;
constexpr double kAip0 = 0.258819403792806798405;  // -Ai'(0)
constexpr double kSeriesRadius = 2.5;
constexpr double kAsymRadius = 9.0;
constexpr double kMaxStep = 0.5;
constexpr double kLogMax = 700.0;

const cplx kOmega{-0.5, 0.86602540378443864676};  // e^{2 pi i/3}

AiryPair airy_series(cplx z) {
    const cplx z3 = z * z * z;
    cplx f = 1.0, fp = 0.0, g = z, gp = 1.0;
    cplx tf = 1.0, tg = z, tfp = z * z / 2.0, tgp = 1.0;
    fp = tfp;
    for (int k = 1; k < 200; ++k) {
        tf *= z3 / double((3 * k - 1) * (3 * k));
        tg *= z3 / double((3 * k) * (3 * k + 1));
        tgp *= z3 / double((3 * k) * (3 * k - 2));
        if (k >= 2) {
            tfp *= z3 / double((3 * k - 1) * (3 * k - 3));
            fp += tfp;
        }
        f += tf;
        g += tg;
        gp += tgp;
        const double mag = std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp);
        if (mag < 1e-18 * (std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp))) break;
    }
    return {kAi0 * f - kAip0 * g, kAi0 * fp - kAip0 * gp};
}

// Poincare expansion, |arg z| <= 2pi/3.  The prefactor e^{-eta} is returned
// separately so that callers can decide about overflow.
struct AsymParts {
    cplx series_ai;   // 1/(2 sqrt(pi) z^{1/4}) sum (-1)^k u_k / eta^k
    cplx series_aip;  // -z^{1/4}/(2 sqrt(pi)) sum (-1)^k v_k / eta^k
    cplx eta;
};

AsymParts airy_asym_parts(cplx z) {
    const cplx sz = std::sqrt(z);
    const cplx eta = 2.0 / 3.0 * z * sz;
    const cplx z14 = std::sqrt(sz);
    cplx sa = 1.0, sb = 1.0;
    double u = 1.0;
    cplx pw = 1.0;
    double last = 1e300;
    for (int k = 1; k < 60; ++k) {
        u *= double((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / double((2 * k - 1) * 216 * k);
        const double v = -double(6 * k + 1) / double(6 * k - 1) * u;
        pw *= -1.0 / eta;
        const cplx ta = u * pw, tb = v * pw;
        const double mag = std::abs(ta) + std::abs(tb);
        if (mag > last) break;  // asymptotic series started to diverge
        sa += ta;
        sb += tb;
        last = mag;
        if (mag < 1e-17) break;
    }
    const double c = 0.5 / std::sqrt(kPi);
    return {c * sa / z14, -c * z14 * sb, eta};
}

// Ai on |z| >= 9 with |arg z| <= 2pi/3.
AiryPair airy_asym_sector(cplx z) {
    AsymParts p = airy_asym_parts(z);
    const double re = -p.eta.real();
    if (re > kLogMax) {
        throw ScaledOverflow("Airy value exceeds double range",
                             re + std::log(std::abs(p.series_ai)));
    }
    if (re < -kLogMax) return {0.0, 0.0};
    const cplx e = std::exp(-p.eta);
    return {e * p.series_ai, e * p.series_aip};
}

bool in_asym_sector(cplx z) { return std::abs(std::arg(z)) <= 2.0 * kPi / 3.0 + 1e-15; }

AiryPair airy_large(cplx z) {
    if (in_asym_sector(z)) return airy_asym_sector(z);
    const cplx w = kOmega, wb = std::conj(kOmega);
    const AiryPair a = airy_asym_sector(w * z);
    const AiryPair b = airy_asym_sector(wb * z);
    return {-w * a.value - wb * b.value, -wb * a.derivative - w * b.derivative};
}

// One Taylor step of y'' = z y from z0 to z0 + h.
void taylor_step(cplx z0, cplx h, cplx& y, cplx& yp) {
    cplx am1 = 0.0, a0 = y, a1 = yp;
    cplx val = a0 + a1 * h, der = a1;
    cplx hk = h;  // h^{k+1} while computing the k+2 coefficient
    cplx hkm = 1.0;
    // a_{k+2} = (z0 a_k + a_{k-1}) / ((k+2)(k+1))
    cplx ak = a0, akm1 = am1, akp1 = a1;
    for (int k = 0; k < 80; ++k) {
        const cplx ak2 = (z0 * ak + akm1) / double((k + 2) * (k + 1));
        hkm = hk;       // h^{k+1}
        hk = hk * h;    // h^{k+2}
        const cplx tv = ak2 * hk, td = double(k + 2) * ak2 * hkm;
        val += tv;
        der += td;
        akm1 = ak;
        ak = akp1;
        akp1 = ak2;
        if (k > 4 && std::abs(tv) + std::abs(td) < 1e-18 * (std::abs(val) + std::abs(der))) break;
    }
    y = val;
    yp = der;
}

AiryPair integrate_ray(cplx from, cplx to, AiryPair start) {
    const cplx d = to - from;
    const int steps = std::max(1, int(std::ceil(std::abs(d) / kMaxStep)));
    const cplx h = d / double(steps);
    cplx y = start.value, yp = start.derivative, z0 = from;
    for (int i = 0; i < steps; ++i) {
        taylor_step(z0, h, y, yp);
        z0 += h;
    }
    return {y, yp};
}

}  // namespace

AiryPair airy(cplx z) {
    const double r = std::abs(z);
    if (r <= kSeriesRadius) return airy_series(z);
    if (r >= kAsymRadius) return airy_large(z);
    const cplx dir = z / r;
    if (std::abs(std::arg(z)) <= kPi / 3.0) {
        const cplx from = dir * kAsymRadius;
        return integrate_ray(from, z, airy_large(from));
    }
    const cplx from = dir * kSeriesRadius;
    return integrate_ray(from, z, airy_series(from));
}

AiryPair airy_minus(cplx z) {
    const AiryPair a = airy(kOmega * z);
    return {a.value, kOmega * a.derivative};
}

cplx phi_minus(cplx z) {
    const AiryPair a = airy_minus(z);
    return a.derivative / a.value;
}

double im_phi_minus_closed_form(double zeta) {
    const double am = std::abs(airy_minus(zeta).value);
    const double aip = std::abs(airy(zeta).derivative);
    return -1.0 / (8.0 * kPi * kPi * am * am * am * aip);
}

AiryZeroTable airy_zeros(int count) {
    if (count < 1 || count > 100) {
        throw ConfigError("airy_zeros: count must lie in [1, 100], got " + std::to_string(count));
    }
    AiryZeroTable t;
    t.zeros.reserve(count);
    t.im_phi_minus.reserve(count);
    auto ai = [](double x) { return airy(cplx(x, 0.0)); };
    for (int j = 1; j <= count; ++j) {
        double lo = -std::pow(3.0 * kPi * (4.0 * j + 1.0) / 8.0, 2.0 / 3.0);
        double hi = -std::pow(3.0 * kPi * (4.0 * j - 3.0) / 8.0, 2.0 / 3.0);
        double flo = ai(lo).value.real();
        for (int it = 0; it < 30; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = ai(mid).value.real();
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        double x = 0.5 * (lo + hi);
        for (int it = 0; it < 8; ++it) {
            const AiryPair a = ai(x);
            const double dx = a.value.real() / a.derivative.real();
            x -= dx;
            if (std::abs(dx) < 1e-15 * std::abs(x)) break;
        }
        t.zeros.push_back(x);
        t.im_phi_minus.push_back(phi_minus(cplx(x, 0.0)).imag());
    }
    return t;
}

FriedlanderSymbols friedlander_symbols(double x) {
    if (!(x >= -30.0 && x <= 10.0)) {
        throw ConfigError("friedlander_symbols: x must lie in [-30, 10]");
    }
    const AiryPair a = airy(cplx(x, 0.0));
    const AiryPair m = airy_minus(cplx(x, 0.0));
    const double ai = a.value.real(), aip = a.derivative.real();
    // integral of Ai^2 over [x, inf)
    const double tail = aip * aip - x * ai * ai;
    const double k = 4.0 * kPi * kPi * tail;
    return {k * std::norm(m.value), k * m.value * std::conj(m.derivative), k * std::norm(m.derivative)};
}

}  // namespace sabinelab::specfun
