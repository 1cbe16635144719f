// Integer-order Bessel and Hankel functions of complex argument.
//
// J_n: Miller backward recurrence normalized with
//   e^{iz}  = J_0 + 2 sum_k i^k J_k      (Im z < 0)
//   e^{-iz} = J_0 + 2 sum_k (-i)^k J_k   (Im z >= 0)
// H_0, H_1: Hankel expansion for |z| >= 17; otherwise Neumann series (lower
// half-plane) or Steed's continued fraction for H_0'/H_0 (upper half-plane).
// H_n: forward recurrence; below Im z = -1.5 the recurrence runs at Im z = -1.5
// on the same circle |z| and the result is carried along it by Taylor steps of
// Bessel's equation.
// Everything carries a running log scale.

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sabinelab::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr double kBig = 1e250;
constexpr double kLogBig = 575.6462732485114;  // ln(1e250)
constexpr double kAsymHankel = 17.0;
constexpr double kLogRange = 700.0;
constexpr double kRecurrenceIm = 1.5;
const cplx kI{0.0, 1.0};

int miller_start(int n, cplx z) {
    const double r = std::abs(z);
    return std::max(n, int(r)) + 30 + int(15.0 * std::cbrt(r));
}

// Normalization target and weight base of the generating-function sum.
cplx sum_base(cplx z) { return z.imag() < 0.0 ? kI : -kI; }

// J_{n-1}, J_n, J_{n+1} from one backward sweep (n >= 1), sharing one scale.
struct JTriple {
    cplx jm1, j, jp1;
    double log = 0.0;
};

JTriple miller_triple(int n, cplx z) {
    const int top = miller_start(n, z);
    const cplx base = sum_base(z);
    const cplx target = std::exp(base * z);

    cplx wk = std::pow(base, top);  // base^k, updated as k decreases
    const cplx inv_base = 1.0 / base;
    cplx jp1 = 0.0, j = 1e-30;
    cplx sum = 0.0;
    double shift = 0.0;

    cplx saved[3];
    double saved_shift[3] = {0.0, 0.0, 0.0};
    auto save = [&](int k, cplx v) {
        const int idx = k - (n - 1);
        if (idx >= 0 && idx <= 2) {
            saved[idx] = v;
            saved_shift[idx] = shift;
        }
    };
    save(top, j);
    for (int k = top; k >= 1; --k) {
        sum += 2.0 * wk * j;
        const cplx jm1 = (2.0 * k / z) * j - jp1;
        jp1 = j;
        j = jm1;
        wk *= inv_base;
        if (std::abs(j) > kBig) {
            j /= kBig;
            jp1 /= kBig;
            sum /= kBig;
            shift -= kLogBig;
        }
        save(k - 1, j);
    }
    sum += j;

    const cplx norm = target / sum;
    const double lnorm = std::log(std::abs(norm));
    const cplx phase = norm / std::abs(norm);
    JTriple out;
    out.log = shift - saved_shift[1] + lnorm;
    out.j = saved[1] * phase;
    out.jm1 = saved[0] * phase * std::exp(saved_shift[1] - saved_shift[0]);
    out.jp1 = saved[2] * phase * std::exp(saved_shift[1] - saved_shift[2]);
    return out;
}

// J_0 .. J_m for moderate |z| (no rescaling needed: |z| < 17).
std::vector<cplx> miller_all(int m, cplx z) {
    const int top = miller_start(m, z);
    const cplx base = sum_base(z);
    const cplx target = std::exp(base * z);
    std::vector<cplx> out(m + 1);
    cplx wk = std::pow(base, top);
    const cplx inv_base = 1.0 / base;
    cplx jp1 = 0.0, j = 1e-30, sum = 0.0;
    if (top <= m) out[top] = j;
    for (int k = top; k >= 1; --k) {
        sum += 2.0 * wk * j;
        const cplx jm1 = (2.0 * k / z) * j - jp1;
        jp1 = j;
        j = jm1;
        wk *= inv_base;
        if (std::abs(j) > kBig) {  // only when starting far beyond m
            j /= kBig;
            jp1 /= kBig;
            sum /= kBig;
            for (int i = k; i <= m && i <= top; ++i) out[i] /= kBig;
        }
        if (k - 1 <= m) out[k - 1] = j;
    }
    sum += j;
    const cplx norm = target / sum;
    for (auto& v : out) v *= norm;
    return out;
}

// H_0 and H_1 by the Hankel expansion (|z| >= 17).
void hankel_asym(cplx z, cplx& h0, cplx& h1) {
    const cplx pref = std::sqrt(2.0 / (kPi * z));
    for (int nu = 0; nu <= 1; ++nu) {
        const double mu = 4.0 * nu * nu;
        cplx s = 1.0, term = 1.0;
        double last = 1e300;
        for (int k = 1; k < 80; ++k) {
            const double odd = 2.0 * k - 1.0;
            term *= kI * (mu - odd * odd) / (k * 8.0 * z);
            const double mag = std::abs(term);
            if (mag > last) break;
            s += term;
            last = mag;
            if (mag < 1e-17) break;
        }
        const cplx h = pref * std::exp(kI * (z - nu * kPi / 2.0 - kPi / 4.0)) * s;
        (nu == 0 ? h0 : h1) = h;
    }
}

void hankel_neumann(cplx z, cplx& h0, cplx& h1) {
    const int m = 2 * int(std::abs(z)) + 60;
    const std::vector<cplx> jv = miller_all(m + 1, z);
    const cplx lg = std::log(z / 2.0) + kEulerGamma;
    cplx s0 = 0.0, s1 = 0.0;
    for (int k = 1; 2 * k + 1 <= m; ++k) {
        const double sg = (k % 2) ? -1.0 : 1.0;
        s0 += sg * jv[2 * k] / double(k);
        s1 += sg * double(2 * k + 1) * jv[2 * k + 1] / double(k * (k + 1));
    }
    const cplx y0 = (2.0 / kPi) * lg * jv[0] - (4.0 / kPi) * s0;
    const cplx y1 = -2.0 * jv[0] / (kPi * z) + (2.0 / kPi) * (lg - 1.0) * jv[1] - (2.0 / kPi) * s1;
    h0 = jv[0] + kI * y0;
    h1 = jv[1] + kI * y1;
}

// Steed's continued fraction for P = H_0'(z)/H_0(z) in the upper half-plane:
// P = -1/(2z) + i + (i/z) K,  K = a_1/(b_1 + a_2/(b_2 + ...)),
// a_k = (k - 1/2)^2, b_k = 2(z + k i).  Modified Lentz.
cplx steed_cf2(cplx z) {
    const double tiny = 1e-300;
    cplx f = tiny, c = f, d = 0.0;
    for (int k = 1; k < 20000; ++k) {
        const double a = (k - 0.5) * (k - 0.5);
        const cplx b = 2.0 * (z + double(k) * kI);
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const cplx delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return -1.0 / (2.0 * z) + kI + (kI / z) * f;
}

void hankel01(cplx z, const cplx& j0, const cplx& j1, cplx& h0, cplx& h1) {
    if (std::abs(z) >= kAsymHankel) {
        hankel_asym(z, h0, h1);
    } else if (z.imag() < 0.0) {
        hankel_neumann(z, h0, h1);
    } else {
        const cplx p = steed_cf2(z);
        h0 = 2.0 * kI / (kPi * z * (j0 * p + j1));
        h1 = -p * h0;
    }
}

// Scaled J_n, J_n' for n >= 0.
void j_scaled(int n, cplx z, cplx& j, cplx& jp, double& log) {
    if (n == 0) {
        const JTriple t = miller_triple(1, z);  // J_0, J_1, J_2
        j = t.jm1;
        jp = -t.j;
        log = t.log;
        return;
    }
    const JTriple t = miller_triple(n, z);
    j = t.j;
    jp = t.jm1 - (double(n) / z) * t.j;
    log = t.log;
}

// H_m, H_m' by forward recurrence from H_0, H_1.  Rounding in H_0, H_1 is
// amplified by about e^{2|Im z|} for Im z < 0, so callers keep Im z >= -kRecurrenceIm.
void hankel_recurrence(int m, cplx z, cplx& h_out, cplx& hp_out, double& log) {
    cplx j0 = 0.0, j1 = 0.0;
    if (std::abs(z) < kAsymHankel && z.imag() >= 0.0) {
        const JTriple t = miller_triple(1, z);
        j0 = t.jm1 * std::exp(t.log);
        j1 = t.j * std::exp(t.log);
    }
    cplx h0, h1;
    hankel01(z, j0, j1, h0, h1);
    log = 0.0;
    if (m == 0) {
        h_out = h0;
        hp_out = -h1;
        return;
    }
    cplx hm1 = h0, h = h1;
    for (int k = 1; k < m; ++k) {
        const cplx hn = (2.0 * k / z) * h - hm1;
        hm1 = h;
        h = hn;
        if (std::abs(h) > kBig) {
            h /= kBig;
            hm1 /= kBig;
            log += kLogBig;
        }
    }
    h_out = h;
    hp_out = hm1 - (double(m) / z) * h;
}

// One Taylor step of z^2 w'' + z w' + (z^2 - n^2) w = 0 from z to z + h.
void taylor_step(double nn, cplx z, cplx h, cplx& w, cplx& wp, double& log) {
    if (h == 0.0) return;
    std::vector<cplx> b;
    b.reserve(64);
    // b_k = a_k h^k for the Taylor coefficients a_k of w about z
    b.assign({w, wp * h});
    cplx sum = b[0] + b[1], dsum = b[1];
    const cplx z2 = z * z;
    for (int k = 0; k < 400; ++k) {
        const cplx km1 = k >= 1 ? b[k - 1] : 0.0, km2 = k >= 2 ? b[k - 2] : 0.0;
        const double kk = k;
        const cplx next = -(h * h) / (z2 * ((kk + 2.0) * (kk + 1.0))) *
                          ((kk + 1.0) * (2.0 * kk + 1.0) * z * b[k + 1] / h + (kk * kk + z2 - nn) * b[k] +
                           2.0 * z * h * km1 + h * h * km2);
        b.push_back(next);
        sum += next;
        dsum += (kk + 2.0) * next;
        if (k > 4 && std::abs(next) + std::abs(b[k + 1]) <= 1e-18 * std::abs(sum)) break;
    }
    w = sum;
    wp = dsum / h;
    const double mag = std::max(std::abs(w), std::abs(wp));
    w /= mag;
    wp /= mag;
    log += std::log(mag);
}

// Carries H_n^(1) (w, w') from z0 to z1 along the arc |z| = |z1|, z0 and z1
// on that arc with Im z0 > Im z1.  Along such arcs H_n^(1) grows relative to
// the second solution, so the transport is stable.
void arc_transport(int n, cplx z0, cplx z1, cplx& w, cplx& wp, double& log) {
    const double nn = double(n) * n, r = std::abs(z1);
    const double t1 = std::arg(z1);
    double t = std::arg(z0);
    cplx z = z0;
    while (t > t1) {
        const double freq = std::abs(std::sqrt(z * z - nn)) / r;
        const double dt = std::min({t - t1, 0.3, 2.0 / (r * std::max(freq, 0.05))});
        t -= dt;
        const cplx next = t > t1 ? std::polar(r, t) : z1;
        taylor_step(nn, z, next - z, w, wp, log);
        z = next;
    }
}

void check_args(int n, cplx z) {
    if (z == cplx(0.0, 0.0)) throw ConfigError("bessel: argument must be nonzero");
    if (std::abs(n) > 20000) throw ConfigError("bessel: |order| must be <= 20000");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw ConfigError("bessel: non-finite argument");
    }
}

// Moves the magnitude of a (value, derivative) pair into its log scale.
void normalize(cplx& v, cplx& d, double& log) {
    const double m = std::max(std::abs(v), std::abs(d));
    if (m > 0.0 && std::isfinite(m)) {
        v /= m;
        d /= m;
        log += std::log(m);
    }
}

void finish(int n, ScaledBesselQuad& q) {
    normalize(q.j, q.j_prime, q.log_j);
    normalize(q.h1, q.h1_prime, q.log_h);
    if (n < 0 && (-n) % 2 == 1) {
        q.j = -q.j;
        q.j_prime = -q.j_prime;
        q.h1 = -q.h1;
        q.h1_prime = -q.h1_prime;
    }
}

}  // namespace

ScaledBesselQuad bessel_j_scaled(int n, cplx z) {
    check_args(n, z);
    ScaledBesselQuad q;
    j_scaled(std::abs(n), z, q.j, q.j_prime, q.log_j);
    finish(n, q);
    return q;
}

ScaledBesselQuad bessel_quad_scaled(int n, cplx z) {
    check_args(n, z);
    const int m = std::abs(n);
    ScaledBesselQuad q;
    j_scaled(m, z, q.j, q.j_prime, q.log_j);
    if (z.imag() < -kRecurrenceIm) {
        const double r = std::abs(z);
        const cplx zs = r > 4.0 * kRecurrenceIm ? cplx(std::sqrt(r * r - kRecurrenceIm * kRecurrenceIm), -kRecurrenceIm)
                                                : std::polar(r, -0.2);
        hankel_recurrence(m, zs, q.h1, q.h1_prime, q.log_h);
        arc_transport(m, zs, z, q.h1, q.h1_prime, q.log_h);
    } else {
        hankel_recurrence(m, z, q.h1, q.h1_prime, q.log_h);
    }
    finish(n, q);
    return q;
}

BesselQuad bessel_quad(int n, cplx z) {
    const ScaledBesselQuad s = bessel_quad_scaled(n, z);
    auto lift = [](cplx m, double log, const char* name) {
        const double lm = log + std::log(std::max(std::abs(m), 1e-300));
        if (lm > kLogRange || (std::abs(m) > 0.0 && lm < -kLogRange)) {
            throw ScaledOverflow(std::string("bessel_quad: ") + name + " outside double range", lm);
        }
        return m * std::exp(log);
    };
    BesselQuad q;
    q.order = n;
    q.argument = z;
    q.j = lift(s.j, s.log_j, "J_n");
    q.j_prime = lift(s.j_prime, s.log_j, "J_n'");
    q.h1 = lift(s.h1, s.log_h, "H_n");
    q.h1_prime = lift(s.h1_prime, s.log_h, "H_n'");
    return q;
}

BesselQuad bessel_uniform_leading(int n, double w) {
    if (n < 1 || !(w > 0.0)) throw ConfigError("bessel_uniform_leading: need n >= 1, w > 0");
    const double nu = n;
    const double zeta = uniform_zeta(w);
    const double one_m_w2 = (1.0 - w) * (1.0 + w);
    // (4 zeta / (1 - w^2))^{1/4}; the ratio is positive on both sides of w = 1
    const double ratio = std::abs(w - 1.0) < 1e-12 ? std::pow(2.0, 4.0 / 3.0) : 4.0 * zeta / one_m_w2;
    const double q = std::pow(ratio, 0.25);
    const double n13 = std::cbrt(nu), n23 = n13 * n13;
    const cplx om{-0.5, 0.86602540378443864676};
    const AiryPair a = airy(cplx(n23 * zeta, 0.0));
    const AiryPair b = airy(om * n23 * zeta);
    const cplx em = std::exp(cplx(0.0, -kPi / 3.0));
    const cplx ep = std::exp(cplx(0.0, 2.0 * kPi / 3.0));
    BesselQuad out;
    out.order = n;
    out.argument = nu * w;
    out.j = q * a.value / n13;
    out.j_prime = -2.0 / (w * q) * a.derivative / n23;
    out.h1 = 2.0 * em * q * b.value / n13;
    out.h1_prime = 4.0 * ep / (w * q) * b.derivative / n23;
    return out;
}

}  // namespace sabinelab::specfun
