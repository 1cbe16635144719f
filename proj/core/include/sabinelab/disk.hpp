#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace sabinelab::disk {

using cplx = std::complex<double>;

/// Obstacle with interior wave speed c and coupling alpha.
struct Transparent {
    double c = 2.0;
    double alpha = 1.0;
};

/// Boundary delta potential V(lambda) = v_coef * (Re lambda)^v_exponent.
struct Delta {
    double v_coef = 1.0;
    double v_exponent = 1.0;

    double potential(cplx lambda) const;
};

/// Interior problem with boundary damping a.
struct Damping {
    double a = 2.0;
};

using SecularProblem = std::variant<Transparent, Delta, Damping>;

void validate(const SecularProblem& problem);
std::string problem_name(const SecularProblem& problem);

/// Delta with V held at its value for Re lambda = re (v_exponent = 0).
Delta freeze(const Delta& d, double re);

struct SecularValue {
    cplx f;
    cplx f_prime;
};

/// f_n(lambda) and its analytic derivative.  Delta derivatives hold V fixed.
/// Throws ScaledOverflow when f leaves the double range.
SecularValue secular(const SecularProblem& problem, int n, cplx lambda);

/// f / S and f' / S with S the local residual scale, S = exp(log_scale).
struct NormalizedSecular {
    cplx f;
    cplx f_prime;
    double log_scale = 0.0;
};

NormalizedSecular secular_normalized(const SecularProblem& problem, int n, cplx lambda);

// ---- seeds -------------------------------------------------------------

/// Fixed-n family, c^{-1} Im = log|(1 - alpha c)/(1 + alpha c)| / 2,
/// c^{-1} Re = (2 - sgn(1 - alpha c) + 2n + 4k) pi / 4.
cplx seed_normal(const Transparent& problem, int n, int k);

/// sqrt(c^-2 s^2 - 1) - arcsec(s/c) + (pm/qm) pi - sgn(sqrt(c^-2 s^2 - 1) - alpha sqrt(s^2 - 1)) pi/(4 qm)
double transverse_g(const Transparent& problem, double s, int qm, int pm);

struct TransverseSeed {
    cplx lambda0;
    int n = 0;
    double r = 0.0;
};

/// Smallest root r of g(., qm, pm) and the seed n r + i Im; n = m q.
TransverseSeed seed_transverse(const Transparent& problem, int p, int q, int m);

/// All roots of g(., n, k) above max(1, c) (one per continuous piece of g).
std::vector<double> transverse_roots(const Transparent& problem, int n, int k);

cplx transverse_lambda(const Transparent& problem, int n, double r);

// ---- refinement --------------------------------------------------------

enum class SeedKind { normal, transverse, continuation, subdivision, glancing, user };

const char* seed_name(SeedKind kind);

struct Resonance {
    cplx lambda;
    int n = 0;
    double residual = 0.0;  ///< |f| / local scale
    SeedKind seed = SeedKind::user;
    std::string problem;
    double tangent_freq = 0.0;  ///< n / Re lambda
    bool guarded = false;       ///< Newton guard held at the seed for some radius <= eps
    int iterations = 0;
};

/// a + d eps^2 < eps b < 1 for f normalized by its scale at lambda0.
struct NewtonGuard {
    double a = 0.0, b = 0.0, d = 0.0, eps = 0.0;
    bool pass = false;
};

NewtonGuard newton_guard(const SecularProblem& problem, int n, cplx lambda0, double eps);

/// Newton iteration inside the trust radius eps.  Throws NoConvergence on
/// three consecutive steps larger than eps, on 50 iterations, or when the
/// limit leaves the trust disk.  Delta problems are re-frozen until V settles.
Resonance newton_refine(const SecularProblem& problem, int n, cplx lambda0, double eps,
                        SeedKind seed = SeedKind::user);

/// Delta resonances near the Dirichlet glancing zeros
/// n - zeta_j (n/2)^{1/3}, j = 1..j_max.
std::vector<Resonance> glancing_family(const Delta& problem, int n, int j_max);

// ---- scans -------------------------------------------------------------

struct ScanWindow {
    double re_min = 200.0;
    double re_max = 300.0;
    double im_floor = -3.0;
    double im_ceiling = 0.25;
    int n_min = 0;
    int n_max = -1;  ///< -1: ceil(1.2 re_max)
};

struct ScanOptions {
    double cell_width = 4.0;
    int max_depth = 3;
    int workers = 0;  ///< 0 = hardware concurrency
};

struct CellReport {
    int n = 0;
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;
    int expected = 0;
    int found = 0;
};

struct ScanResult {
    std::vector<Resonance> resonances;  ///< sorted by (Re lambda, n)
    std::vector<CellReport> incomplete;
    long evaluations = 0;
};

ScanResult scan(const SecularProblem& problem, const ScanWindow& window,
                const ScanOptions& options = {});

/// (1/2 pi i) times the contour integral of f'/f around the rectangle.
cplx count_zeros(const SecularProblem& problem, int n, double re_lo, double re_hi, double im_lo,
                 double im_hi);

/// problem,n,re_lambda,im_lambda,residual,seed,tangent_freq
void write_resonance_csv(std::ostream& os, const std::vector<Resonance>& rows);

}  // namespace sabinelab::disk
