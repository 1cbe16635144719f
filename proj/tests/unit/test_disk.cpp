#include "sabinelab/disk.hpp"
#include "sabinelab/errors.hpp"
#include "sabinelab/sabine.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace sabinelab;
using namespace sabinelab::disk;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Power series for J_n(z); fine for |z| up to ~15 in double precision.
cplx series_j(int n, cplx z) {
    cplx term = std::pow(z / 2.0, n) / std::tgamma(n + 1.0), sum = term;
    const cplx q = -(z * z) / 4.0;
    for (int k = 1; k < 80; ++k) {
        term *= q / (double(k) * double(k + n));
        sum += term;
    }
    return sum;
}

cplx series_jp(int n, cplx z) { return n == 0 ? -series_j(1, z) : series_j(n - 1, z) - double(n) / z * series_j(n, z); }

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("secular functions match reference values") {
    const cplx l(10.0, -0.5);
    // mpmath, n = 2
    CHECK(rel(secular(Transparent{2.0, 1.0}, 2, l).f, {-0.037222862598079907, -0.018422155440332721}) < 1e-9);
    CHECK(rel(secular(Delta{3.0, 0.0}, 2, l).f, {0.11877052422821735, -0.21011096466421472}) < 1e-9);
    CHECK(rel(secular(Damping{2.0}, 2, l).f, {-0.0025417206264248776, -0.44474489266271988}) < 1e-9);
}

TEST_CASE("damping secular function against the Bessel power series") {
    for (int n : {0, 2, 5}) {
        for (const cplx l : {cplx(10.0, 0.0), cplx(7.5, -1.2), cplx(3.0, -0.3)}) {
            const cplx want = series_jp(n, l) - cplx(0.0, 2.0) * series_j(n, l);
            CHECK(rel(secular(Damping{2.0}, n, l).f, want) < 1e-10);
        }
    }
    // real axis, boost route
    for (double x : {4.0, 11.0, 25.0}) {
        const double j = boost::math::cyl_bessel_j(3, x), jp = boost::math::cyl_bessel_j_prime(3, x);
        CHECK(rel(secular(Damping{0.7}, 3, x).f, cplx(jp, -0.7 * j)) < 1e-10);
    }
}

TEST_CASE("delta secular function agrees with its unreduced form") {
    // J H - 2i/(pi V) == 0  <=>  J (H - 2i/(pi V J)) == 0; compare against J H directly
    const Delta d{2.5, 0.0};
    for (const cplx l : {cplx(12.0, -0.4), cplx(40.0, -2.0)}) {
        const cplx jh = secular(Delta{1e300, 0.0}, 4, l).f;
        const cplx f = secular(d, 4, l).f;
        CHECK(std::abs(f - (jh - cplx(0.0, 2.0 / (kPi * 2.5)))) < 1e-10 * (std::abs(jh) + 1.0));
    }
    CHECK(Delta{2.0, 0.5}.potential({16.0, -3.0}) == doctest::Approx(8.0));
    CHECK(freeze(Delta{2.0, 0.5}, 16.0).potential({999.0, 0.0}) == doctest::Approx(8.0));
}

TEST_CASE("secular derivative matches finite differences") {
    const SecularProblem problems[] = {Transparent{2.0, 1.0}, Transparent{2.0, 0.4}, Delta{5.0, 0.0}, Damping{2.0}};
    int count = 0;
    for (const SecularProblem& p : problems) {
        for (int n : {0, 7, 60, 150, 230}) {
            const cplx l(205.0 + n * 0.1, -0.8);
            if (count++ >= 20) break;
            const double h = 1e-5;
            const NormalizedSecular s = secular_normalized(p, n, l);
            const NormalizedSecular a = secular_normalized(p, n, l + h), b = secular_normalized(p, n, l - h);
            const cplx fa = a.f * std::exp(a.log_scale - s.log_scale), fb = b.f * std::exp(b.log_scale - s.log_scale);
            const cplx fd = (fa - fb) / (2.0 * h);
            CAPTURE(problem_name(p));
            CAPTURE(n);
            CHECK(std::abs(fd - s.f_prime) < 1e-6 * (std::abs(s.f_prime) + 1.0));
        }
    }
}

TEST_CASE("mode symmetry") {
    for (const SecularProblem& p : {SecularProblem{Transparent{}}, SecularProblem{Delta{2.0, 0.0}},
                                    SecularProblem{Damping{}}}) {
        for (int n : {1, 4, 33}) {
            const cplx l(57.0, -1.1);
            const NormalizedSecular a = secular_normalized(p, n, l), b = secular_normalized(p, -n, l);
            // J_{-n} = (-1)^n J_n, so f changes at most by a sign
            CHECK(std::min(std::abs(a.f - b.f), std::abs(a.f + b.f)) < 1e-10);
            CHECK(a.log_scale == doctest::Approx(b.log_scale));
        }
    }
}

TEST_CASE("secular overflow is reported") {
    CHECK_THROWS_AS(secular(Transparent{2.0, 1.0}, 3000, cplx(1000.0, -1.0)), ScaledOverflow);
    CHECK_NOTHROW(secular_normalized(Transparent{2.0, 1.0}, 3000, cplx(1000.0, -1.0)));
}

TEST_CASE("normal seeds") {
    const Transparent t{2.0, 1.0};
    const cplx s = seed_normal(t, 0, 0);
    CHECK(s.real() == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-14));
    CHECK(s.real() == doctest::Approx(4.71239).epsilon(1e-6));
    CHECK(s.imag() == doctest::Approx(-std::log(3.0)).epsilon(1e-14));
    for (int k = 0; k < 5; ++k) {
        CHECK(seed_normal(t, 3, k + 1).real() - seed_normal(t, 3, k).real() == doctest::Approx(2.0 * kPi));
    }
    CHECK_THROWS_AS(seed_normal(Transparent{2.0, 0.5}, 0, 0), ConfigError);

    for (const Transparent tt : {Transparent{2.0, 1.0}, Transparent{0.5, 1.0}, Transparent{2.0, 0.4},
                                 Transparent{0.5, 4.0}}) {
        const double q = sabine::sabine_quotient(billiards::ConvexDomain::disk(),
                                                 reflect::TransparentObstacle{tt.c, tt.alpha}, {0.0, 0.0}, 1)
                             .value;
        CHECK(std::abs(seed_normal(tt, 0, 2).imag() - q) < 1e-9);
    }
}

TEST_CASE("normal seeds converge to resonances") {
    const Transparent t{2.0, 1.0};
    for (int k : {10, 20, 40}) {
        const cplx s = seed_normal(t, 0, k);
        const Resonance r = newton_refine(t, 0, s, 1.5, SeedKind::normal);
        CHECK(r.residual < 1e-8);
        CHECK(std::abs(r.lambda - s) < 1.0);
        CHECK(r.seed == SeedKind::normal);
        CHECK(r.guarded);
    }
}

TEST_CASE("transverse seeds") {
    const Transparent t{2.0, 1.0};
    const TransverseSeed ts = seed_transverse(t, -1, 3, 10);
    CHECK(ts.n == 30);
    CHECK(std::abs(transverse_g(t, ts.r, 30, -10)) < 1e-10);
    CHECK(ts.lambda0.real() == doctest::Approx(30 * ts.r));
    CHECK(std::abs(transverse_lambda(t, 30, ts.r) - ts.lambda0) < 1e-12);

    // the imaginary part is the Sabine quotient on the orbit with interior
    // tangential frequency c / r
    const double q = sabine::sabine_quotient(billiards::ConvexDomain::disk(), reflect::TransparentObstacle{2.0, 1.0},
                                             {0.0, t.c / ts.r}, 1)
                         .value;
    CHECK(std::abs(ts.lambda0.imag() - q) < 1e-9);

    double prev = INFINITY, last = seed_transverse(t, -1, 3, 4).r;
    for (int m : {8, 16, 32, 64}) {
        const double r = seed_transverse(t, -1, 3, m).r;
        CHECK(std::abs(r - last) < prev);
        prev = std::abs(r - last);
        last = r;
    }

    for (double r : transverse_roots(t, 30, -10)) CHECK(std::abs(transverse_g(t, r, 30, -10)) < 1e-10);

    const Resonance rr = newton_refine(t, ts.n, ts.lambda0, 1.5, SeedKind::transverse);
    CHECK(rr.residual < 1e-8);
    CHECK(rr.lambda.imag() < 0.0);
}

TEST_CASE("newton fixed point and guard") {
    const Transparent t{2.0, 1.0};
    const Resonance r = newton_refine(t, 5, seed_normal(t, 5, 30), 1.5);
    const Resonance again = newton_refine(t, 5, r.lambda, 0.1);
    CHECK(std::abs(again.lambda - r.lambda) < 1e-10 * std::abs(r.lambda));
    CHECK(again.iterations <= 2);
    const NewtonGuard g = newton_guard(t, 5, r.lambda + cplx(1e-3, 0.0), 0.1);
    CHECK(g.pass);
    CHECK(g.a + g.d * g.eps * g.eps < g.eps * g.b);
    CHECK(g.eps * g.b < 1.0);
}

TEST_CASE("newton reports non-convergence") {
    // a seed far from any zero with a tiny trust radius
    CHECK_THROWS_AS(newton_refine(Damping{2.0}, 0, cplx(100.0, 5.0), 1e-3), NoConvergence);
}

TEST_CASE("strong delta potential gives Dirichlet eigenvalues") {
    const Resonance r = newton_refine(Delta{1e8, 0.0}, 0, cplx(2.4, -0.01), 0.5);
    CHECK(std::abs(r.lambda - cplx(2.404825557695773, 0.0)) < 1e-3);
    const Resonance d = newton_refine(Damping{1e8}, 1, cplx(3.8, -0.01), 0.5);
    CHECK(std::abs(d.lambda - cplx(3.831705970207512, 0.0)) < 1e-3);
}

TEST_CASE("glancing family sits near the glancing seeds") {
    const std::vector<Resonance> g = glancing_family(Delta{1.0, 5.0 / 6.0}, 1000, 3);
    REQUIRE(!g.empty());
    for (const Resonance& r : g) {
        CHECK(r.residual < 1e-8);
        CHECK(r.lambda.imag() < 0.0);
        CHECK(r.seed == SeedKind::glancing);
        CHECK(r.lambda.real() > 1000.0);
        CHECK(r.lambda.real() < 1000.0 + 12.0 * std::cbrt(500.0));
    }
}

TEST_CASE("argument principle count") {
    const cplx c = count_zeros(Transparent{2.0, 1.0}, 0, 200.0, 210.0, -3.0, 0.25);
    CHECK(std::abs(c - cplx(1.0, 0.0)) < 1e-3);
    const cplx z = count_zeros(Transparent{2.0, 1.0}, 0, 200.0, 210.0, -0.5, 0.25);
    CHECK(std::abs(z) < 1e-3);
}

TEST_CASE("small scan invariants") {
    const ScanWindow w{200.0, 230.0, -3.0, 0.25, 0, 40};
    ScanOptions o;
    o.workers = 1;
    const ScanResult a = scan(Transparent{2.0, 1.0}, w, o);
    REQUIRE(!a.resonances.empty());
    CHECK(a.incomplete.empty());
    std::set<std::pair<long, int>> keys;
    for (std::size_t i = 0; i < a.resonances.size(); ++i) {
        const Resonance& r = a.resonances[i];
        CHECK(r.residual < 1e-8);
        CHECK(r.lambda.imag() < 0.0);
        CHECK(r.n >= 0);
        CHECK(r.n <= 40);
        CHECK(r.tangent_freq == doctest::Approx(r.n / r.lambda.real()));
        if (i > 0) CHECK(a.resonances[i - 1].lambda.real() <= r.lambda.real());
        for (std::size_t j = 0; j < i; ++j) {
            if (a.resonances[j].n == r.n) CHECK(std::abs(a.resonances[j].lambda - r.lambda) > 1e-6);
        }
        // every resonance is in the Sabine band up to a small tolerance
        CHECK(r.lambda.imag() >= -1.15457 - 0.05);
        CHECK(r.lambda.imag() <= -1.09861 + 0.05);
    }
    o.workers = 3;
    const ScanResult b = scan(Transparent{2.0, 1.0}, w, o);
    REQUIRE(a.resonances.size() == b.resonances.size());
    for (std::size_t i = 0; i < a.resonances.size(); ++i) {
        CHECK(a.resonances[i].lambda == b.resonances[i].lambda);
        CHECK(a.resonances[i].n == b.resonances[i].n);
    }
}

TEST_CASE("resonance csv") {
    Resonance r;
    r.lambda = {201.5, -1.1};
    r.n = 3;
    r.residual = 1e-12;
    r.seed = SeedKind::normal;
    r.problem = "transparent";
    r.tangent_freq = 3 / 201.5;
    std::ostringstream os;
    write_resonance_csv(os, {r});
    CHECK(os.str().rfind("problem,n,re_lambda,im_lambda,residual,seed,tangent_freq\n", 0) == 0);
    CHECK(os.str().find("transparent,3,201.5,-1.1,") != std::string::npos);
    CHECK(std::string(seed_name(SeedKind::transverse)) == "transverse");
}

TEST_CASE("problem validation") {
    CHECK_THROWS_AS(validate(Transparent{1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(validate(Damping{0.0}), ConfigError);
    CHECK_THROWS_AS(validate(Delta{0.0, 1.0}), ConfigError);
    CHECK(problem_name(Damping{}) == "damping");
}
