#include "sabinelab/billiards.hpp"
#include "sabinelab/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace sabinelab;
using namespace sabinelab::billiards;

namespace {

constexpr double kPi = 3.14159265358979323846;

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double circ_diff(double a, double b, double period) {
    double d = std::fmod(a - b, period);
    if (d > period / 2) d -= period;
    if (d < -period / 2) d += period;
    return std::abs(d);
}

// Independent ray trace: straight line from the footpoint at the incidence
// angle, intersected with x^2/a^2 + y^2/b^2 = 1 in closed form.
Vec2 trace_ellipse(const ConvexDomain& d, double a, double b, PhasePoint q) {
    const Vec2 p = d.point(q.s), t = d.tangent(q.s), n = d.normal(q.s);
    const double nc = std::sqrt(1.0 - q.xi * q.xi);
    const Vec2 v{q.xi * t.x + nc * n.x, q.xi * t.y + nc * n.y};
    const double A = v.x * v.x / (a * a) + v.y * v.y / (b * b);
    const double B = 2.0 * (p.x * v.x / (a * a) + p.y * v.y / (b * b));
    const double tau = -B / A;
    return {p.x + tau * v.x, p.y + tau * v.y};
}

// Product of angular momenta about the two foci, conserved by elliptic billiards.
double focal_invariant(double a, double b, Vec2 p, Vec2 v) {
    const double f = std::sqrt(a * a - b * b);
    const double l1 = (p.x - f) * v.y - p.y * v.x;
    const double l2 = (p.x + f) * v.y - p.y * v.x;
    return l1 * l2;
}

}  // namespace

TEST_CASE("domains are arclength parametrized and strictly convex") {
    for (const ConvexDomain& d : {ConvexDomain::disk(), ConvexDomain::ellipse(1.5, 1.0), ConvexDomain::ellipse(1.2, 1.0)}) {
        const double L = d.perimeter();
        const double h = 1e-6;
        for (int i = 0; i < 64; ++i) {
            const double s = L * i / 64.0;
            const Vec2 t = d.tangent(s);
            CHECK(std::hypot(t.x, t.y) == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(dist(d.point(s + h), d.point(s - h)) / (2 * h) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(d.curvature(s) >= d.min_curvature() - 1e-12);
            CHECK(d.min_curvature() > 0.0);
        }
    }
    CHECK(ConvexDomain::disk().perimeter() == doctest::Approx(2 * kPi));
    const ConvexDomain e = ConvexDomain::ellipse(1.5, 1.0);
    CHECK(e.max_curvature() == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(e.min_curvature() == doctest::Approx(1.0 / 2.25).epsilon(1e-6));
    CHECK_THROWS_AS(ConvexDomain::disk(-1.0), ConfigError);
    CHECK_THROWS_AS(ConvexDomain::ellipse(1.0, 0.0), ConfigError);
}

TEST_CASE("support-function constructor reproduces the disk") {
    const ConvexDomain d = ConvexDomain::from_support_function([](double) { return 2.0; }, [](double) { return 0.0; },
                                                               [](double) { return 0.0; });
    CHECK(d.perimeter() == doctest::Approx(4 * kPi).epsilon(1e-8));
    CHECK(d.curvature(1.0) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("disk chords") {
    const ConvexDomain d = ConvexDomain::disk();
    const StepResult r0 = billiard_step(d, {0.0, 0.0});
    CHECK(r0.chord == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(circ_diff(r0.next.s, kPi, 2 * kPi) < 1e-10);

    const StepResult r6 = billiard_step(d, {0.3, 0.6});
    CHECK(r6.chord == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(r6.next.xi == doctest::Approx(0.6).epsilon(1e-12));

    for (double xi : {-0.9, -0.3, 0.1, 0.5, 0.95}) {
        CAPTURE(xi);
        const StepResult r = billiard_step(d, {1.0, xi});
        CHECK(r.chord == doctest::Approx(2.0 * std::sqrt(1 - xi * xi)).epsilon(1e-12));
        CHECK(std::abs(r.next.xi - xi) < 1e-12);
        const double advance = 2.0 * std::acos(xi);
        CHECK(circ_diff(r.next.s, 1.0 + advance, 2 * kPi) < 1e-10);
        CHECK(dist(d.point(1.0), d.point(r.next.s)) == doctest::Approx(r.chord).epsilon(1e-12));
    }
}

TEST_CASE("orbits close on the disk") {
    const ConvexDomain d = ConvexDomain::disk();
    const OrbitSegment two = orbit(d, {0.4, 0.0}, 2);
    CHECK(circ_diff(two.points.back().s, 0.4, 2 * kPi) < 1e-10);
    const OrbitSegment three = orbit(d, {0.4, std::cos(kPi / 3.0)}, 3);
    CHECK(circ_diff(three.points.back().s, 0.4, 2 * kPi) < 1e-10);
    CHECK(three.points.size() == 4);
    CHECK(three.chords.size() == 3);

    CHECK(mean_chord(orbit(d, {0.0, 0.0}, 4)) == doctest::Approx(2.0));
    CHECK(mean_chord(orbit(d, {2.0, 0.6}, 7)) == doctest::Approx(1.6));
}

TEST_CASE("ellipse step agrees with a closed-form ray trace") {
    const double a = 1.5, b = 1.0;
    const ConvexDomain e = ConvexDomain::ellipse(a, b);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> us(0.0, e.perimeter()), ux(-0.97, 0.97);
    for (int i = 0; i < 40; ++i) {
        const PhasePoint q{us(rng), ux(rng)};
        const StepResult r = billiard_step(e, q);
        const Vec2 want = trace_ellipse(e, a, b, q);
        CHECK(dist(e.point(r.next.s), want) < 1e-9);
        CHECK(r.chord == doctest::Approx(dist(e.point(q.s), want)).epsilon(1e-9));
    }
}

TEST_CASE("generating-function relation on the ellipse") {
    const ConvexDomain e = ConvexDomain::ellipse(1.5, 1.0);
    for (double s : {0.0, 0.8, 2.5, 4.4}) {
        for (double xi : {-0.7, 0.2, 0.9}) {
            const StepResult r = billiard_step(e, {s, xi});
            const double h = 1e-6;
            const Vec2 y = e.point(r.next.s), x = e.point(s);
            const double dx = (dist(e.point(s + h), y) - dist(e.point(s - h), y)) / (2 * h);
            const double dy = (dist(x, e.point(r.next.s + h)) - dist(x, e.point(r.next.s - h))) / (2 * h);
            CHECK(std::abs(xi + dx) < 1e-8);
            CHECK(std::abs(r.next.xi - dy) < 1e-8);
        }
    }
}

TEST_CASE("elliptic first integral is conserved") {
    const double a = 1.5, b = 1.0;
    const ConvexDomain e = ConvexDomain::ellipse(a, b);
    const OrbitSegment o = orbit(e, {0.37, 0.41}, 60);
    auto invariant = [&](std::size_t k) {
        const Vec2 p = e.point(o.points[k].s), q = e.point(o.points[k + 1].s);
        const double l = dist(p, q);
        return focal_invariant(a, b, p, {(q.x - p.x) / l, (q.y - p.y) / l});
    };
    const double i0 = invariant(0);
    bool xi_changes = false;
    for (std::size_t k = 1; k + 1 < o.points.size(); ++k) {
        CHECK(std::abs(invariant(k) - i0) < 1e-8);
        if (std::abs(o.points[k].xi - o.points[0].xi) > 1e-3) xi_changes = true;
    }
    CHECK(xi_changes);
    const double l = mean_chord(o);
    CHECK(l >= *std::min_element(o.chords.begin(), o.chords.end()));
    CHECK(l <= *std::max_element(o.chords.begin(), o.chords.end()));
}

TEST_CASE("billiard map preserves area and is reversible") {
    std::mt19937_64 rng(11);
    for (const ConvexDomain& d : {ConvexDomain::disk(), ConvexDomain::ellipse(1.6, 1.0)}) {
        std::uniform_real_distribution<double> us(0.0, d.perimeter()), ux(-0.95, 0.95);
        for (int i = 0; i < 50; ++i) {
            const PhasePoint q{us(rng), ux(rng)};
            CHECK(jacobian_determinant(d, q) == doctest::Approx(1.0).epsilon(1e-6));
            const StepResult f = billiard_step(d, q);
            const StepResult back = billiard_step(d, {f.next.s, -f.next.xi});
            CHECK(circ_diff(back.next.s, q.s, d.perimeter()) < 1e-8);
            CHECK(std::abs(back.next.xi + q.xi) < 1e-8);
        }
    }
}

TEST_CASE("glancing is rejected") {
    const ConvexDomain d = ConvexDomain::disk();
    CHECK_THROWS_AS(billiard_step(d, {0.0, 1.0}), GlancingError);
    CHECK_THROWS_AS(billiard_step(d, {0.0, -1.0 + 1e-13}), GlancingError);
    CHECK_THROWS_AS(orbit(d, {0.0, 1.0}, 3), GlancingError);
    CHECK_NOTHROW(billiard_step(d, {0.0, 1.0 - 1e-9}));
}

TEST_CASE("near-glancing expansions") {
    const GlancingReport disk = glancing_expansion_check(ConvexDomain::disk(), 0.0);
    for (std::size_t i = 0; i < disk.one_minus_xi.size(); ++i) {
        CHECK(disk.normal_remainder[i] < 1e-12);
        CHECK(disk.chord_remainder[i] < 1e-12);
    }
    CHECK(disk.passes());

    const ConvexDomain e = ConvexDomain::ellipse(1.2, 1.0);
    for (double s : {0.0, e.perimeter() / 4, 0.3 * e.perimeter()}) {
        CAPTURE(s);
        const GlancingReport r = glancing_expansion_check(e, s);
        CHECK(r.one_minus_xi.size() == 13);
        CHECK(r.normal_exponent >= 0.9);
        CHECK(r.chord_exponent >= 0.9);
    }
}

TEST_CASE("orbit csv") {
    std::ostringstream os;
    write_orbit_csv(os, orbit(ConvexDomain::disk(), {0.0, 0.6}, 2));
    const std::string s = os.str();
    CHECK(s.rfind("k,s,xi,chord\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
}
