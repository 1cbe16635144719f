#include "sabinelab/errors.hpp"
#include "sabinelab/sabine.hpp"
#include "sabinelab/specfun.hpp"

#include <doctest.h>

#include <cmath>

using namespace sabinelab;
using namespace sabinelab::sabine;
using reflect::BoundaryDamping;
using reflect::DeltaPotential;
using reflect::TransparentObstacle;

namespace {

// N = 1 quotient on the unit disk straight from the formulas: chord 2 sqrt(1 - xi^2).
double disk_quotient(const ReflectivityModel& m, double xi) {
    const double lr = 2.0 * std::log(std::abs(reflect::reflect(m, xi)));
    return lr / (2.0 / reflect::wave_speed(m) * 2.0 * std::sqrt(1.0 - xi * xi));
}

}  // namespace

TEST_CASE("quotient on the diameter orbit") {
    const ConvexDomain d = ConvexDomain::disk();
    for (int n : {1, 2, 5, 11}) {
        CHECK(sabine_quotient(d, TransparentObstacle{2.0, 1.0}, {0.0, 0.0}, n).value ==
              doctest::Approx(-std::log(3.0)).epsilon(1e-12));
    }
    CHECK(sabine_quotient(d, TransparentObstacle{2.0, 1.0}, {0.0, 0.0}, 1).value ==
          doctest::Approx(-1.09861).epsilon(1e-5));
    CHECK(sabine_quotient(d, BoundaryDamping{2.0}, {0.0, 0.0}, 1).value ==
          doctest::Approx(-2.0 * std::log(3.0) / 4.0).epsilon(1e-12));
    CHECK(sabine_quotient(d, BoundaryDamping{2.0}, {0.0, 0.0}, 1).value == doctest::Approx(-0.54931).epsilon(1e-5));
    CHECK(std::abs(sabine_quotient(d, TransparentObstacle{0.5, 1.0}, {0.0, 0.8}, 3).value) < 1e-15);
}

TEST_CASE("total transmission propagates") {
    const Quotient q = sabine_quotient(ConvexDomain::disk(), BoundaryDamping{1.0}, {0.0, 0.0}, 2);
    CHECK(q.total_transmission);
    CHECK(std::isinf(q.value));
    CHECK(q.value < 0.0);
}

TEST_CASE("disk quotient is independent of N and footpoint") {
    const ConvexDomain d = ConvexDomain::disk();
    const ReflectivityModel m = TransparentObstacle{2.0, 0.7};
    for (double xi : {0.0, 0.3, -0.55, 0.9}) {
        const double ref = sabine_quotient(d, m, {0.0, xi}, 1).value;
        const std::vector<Quotient> all = sabine_quotients(d, m, {1.7, xi}, 20);
        REQUIRE(all.size() == 20);
        for (const Quotient& q : all) CHECK(std::abs(q.value - ref) < 1e-12);
        CHECK(std::abs(ref - disk_quotient(m, xi)) < 1e-12);
    }
}

TEST_CASE("disk bounds match a dense brute-force grid") {
    const ConvexDomain d = ConvexDomain::disk();
    for (const ReflectivityModel& m : {ReflectivityModel{TransparentObstacle{2.0, 1.0}},
                                       ReflectivityModel{TransparentObstacle{0.5, 1.0}},
                                       ReflectivityModel{BoundaryDamping{2.0}}}) {
        CAPTURE(reflect::problem_name(m));
        GridSpec g;
        const SabineBand b = sabine_bounds(d, m, 4, g);
        double lo = INFINITY, hi = -INFINITY;
        for (int i = 0; i <= 10000; ++i) {
            const double xi = (1.0 - g.collar) * i / 10000.0;
            const double v = disk_quotient(m, xi);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(b.lower == doctest::Approx(lo).epsilon(1e-3));
        CHECK(b.upper == doctest::Approx(hi).epsilon(1e-3));
        CHECK(b.lower <= b.upper);
        CHECK(b.upper <= 1e-15);
        CHECK(b.wave_speed == reflect::wave_speed(m));
        for (const NExtrema& e : b.per_n) {
            CHECK(e.min <= b.lower);
            CHECK(b.upper <= e.max);
        }
    }
}

TEST_CASE("TE band on the disk contains the normal-incidence value") {
    const SabineBand b = sabine_bounds(ConvexDomain::disk(), TransparentObstacle{2.0, 1.0}, 8);
    CHECK(b.lower <= -std::log(3.0) + 1e-12);
    CHECK(b.upper >= -std::log(3.0) - 1e-12);
    CHECK(b.lower == doctest::Approx(-1.15457).epsilon(1e-4));
    CHECK(b.upper == doctest::Approx(-1.09861).epsilon(1e-4));
}

TEST_CASE("TIR reaches zero") {
    const SabineBand b = sabine_bounds(ConvexDomain::disk(), TransparentObstacle{0.5, 1.0}, 3);
    CHECK(std::abs(b.upper) < 1e-12);
}

TEST_CASE("damping with a transmission zero keeps a finite band") {
    const double xi0 = 0.6;
    const ReflectivityModel m = BoundaryDamping{std::sqrt(1.0 - xi0 * xi0)};
    const SabineBand b = sabine_bounds(ConvexDomain::disk(), m, 3);
    CHECK(std::isfinite(b.lower));
    CHECK(std::isfinite(b.upper));
    CHECK(b.lower <= b.upper);
    CHECK(b.upper < 0.0);
}

TEST_CASE("ellipse bounds bracket the sampled quotients") {
    const ConvexDomain e = ConvexDomain::ellipse(1.3, 1.0);
    GridSpec g;
    g.points = 65;
    g.footpoints = 16;
    const SabineBand b = sabine_bounds(e, TransparentObstacle{2.0, 1.0}, 4, g);
    CHECK(b.lower <= b.upper);
    for (const NExtrema& x : b.per_n) {
        CHECK(x.min <= b.lower);
        CHECK(b.upper <= x.max);
        CHECK(sabine_quotient(e, TransparentObstacle{2.0, 1.0}, x.argmin, x.n).value ==
              doctest::Approx(x.min).epsilon(1e-12));
    }
}

TEST_CASE("sabine_bounds rejects bad grids") {
    const ConvexDomain d = ConvexDomain::disk();
    CHECK_THROWS_AS(sabine_bounds(d, BoundaryDamping{2.0}, 0), ConfigError);
    GridSpec g;
    g.points = 2;
    CHECK_THROWS_AS(sabine_bounds(d, BoundaryDamping{2.0}, 2, g), ConfigError);
    g = GridSpec{};
    g.collar = 1.5;
    CHECK_THROWS_AS(sabine_bounds(d, BoundaryDamping{2.0}, 2, g), ConfigError);
    g = GridSpec{};
    g.brewster_half_width = 2.0;
    CHECK_THROWS_AS(sabine_bounds(d, TransparentObstacle{2.0, 0.4}, 2, g), ConfigError);
    CHECK_THROWS_AS(sabine_quotient(d, BoundaryDamping{2.0}, {0.0, 0.0}, 0), ConfigError);
}

TEST_CASE("theorem collar") {
    CHECK(theorem_collar(1e-5) == doctest::Approx(0.1));
    CHECK(theorem_collar(0.01, 0.5) == doctest::Approx(0.1));
}

TEST_CASE("glancing limit") {
    const ConvexDomain d = ConvexDomain::disk();
    const TransparentObstacle m{2.0, 1.0};
    const double lim = glancing_limit(d, m, 0.0);
    CHECK(lim / m.c == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-12));
    const Extrapolation x = glancing_extrapolation(d, m, 0.0);
    CHECK(std::abs(x.estimate - lim) <= std::max(3.0 * x.error, 1e-4));
    CHECK(glancing_limit(d, TransparentObstacle{0.5, 1.0}, 0.0) == 0.0);

    const ConvexDomain e = ConvexDomain::ellipse(1.5, 1.0);
    const double s_hi = e.argmax_curvature(), s_lo = e.argmin_curvature();
    const double l_hi = glancing_limit(e, m, s_hi), l_lo = glancing_limit(e, m, s_lo);
    CHECK(l_hi / l_lo == doctest::Approx(e.curvature(s_hi) / e.curvature(s_lo)).epsilon(1e-10));
    for (double s : {s_hi, s_lo}) {
        const Extrapolation ex = glancing_extrapolation(e, m, s);
        CHECK(std::abs(ex.estimate - glancing_limit(e, m, s)) <= std::max(3.0 * ex.error, 1e-3 * std::abs(ex.estimate)));
    }
}

TEST_CASE("glancing bands on the disk") {
    const GlancingInput in{-0.9333, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
    const std::vector<GlancingBand> bands = glancing_bands(in, 1e-3, 4);
    REQUIRE(bands.size() == 4);
    const specfun::AiryZeroTable t = specfun::airy_zeros(5);
    for (std::size_t j = 0; j < bands.size(); ++j) {
        CAPTURE(j);
        CHECK(bands[j].j == static_cast<int>(j) + 1);
        CHECK(bands[j].zeta_j == doctest::Approx(t.zeros[j]));
        CHECK(bands[j].b_min == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
        CHECK(bands[j].b_max == doctest::Approx(std::cbrt(2.0)).epsilon(1e-14));
        CHECK(bands[j].im_lambda_max < 0.0);
        CHECK(bands[j].im_lambda_min <= bands[j].im_lambda_max);
        if (j > 0) CHECK(bands[j].im_lambda_max < bands[j - 1].im_lambda_min);
        const bool want_gap = bands[j].b_min / bands[j].b_max > t.im_phi_minus[j] / t.im_phi_minus[j + 1];
        CHECK(bands[j].gap_below == want_gap);
    }
    CHECK(band_slope(-0.9333) == doctest::Approx(2.0 - 2 * 0.9333 - 1.0 / 3.0));
    CHECK(band_slope(-0.9333) == doctest::Approx(-0.2).epsilon(1e-3));
}

TEST_CASE("band formula reduces to the power law in Re lambda") {
    const double alpha = -5.0 / 6.0;
    const GlancingInput in{alpha, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
    const double phi1 = specfun::airy_zeros(1).im_phi_minus[0];
    for (double re : {1e3, 3e3, 1e4}) {
        const double im = predicted_im_lambda(in, phi1, 1.0 / re, 1.0, 1.0);
        CHECK(im < 0.0);
        CHECK(band_ratio(re, im, alpha, phi1) == doctest::Approx(std::cbrt(2.0)).epsilon(1e-12));
    }
    const double a = predicted_im_lambda(in, phi1, 1e-3, 1.0, 1.0), b = predicted_im_lambda(in, phi1, 1e-4, 1.0, 1.0);
    CHECK(std::log10(a / b) / -1.0 == doctest::Approx(band_slope(alpha)).epsilon(1e-12));
}

TEST_CASE("glancing bands with a curvature range widen") {
    const GlancingInput in{-1.0, 1.0, 1.0, 0.8, 1.25, 0.0, 0.0};
    const std::vector<GlancingBand> b = glancing_bands(in, 1e-3, 2);
    CHECK(b[0].b_min < b[0].b_max);
    CHECK(b[0].b_max / b[0].b_min == doctest::Approx(std::pow(1.25 / 0.8, 4.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(glancing_bands(in, 0.0, 2), ConfigError);
    CHECK_THROWS_AS(glancing_bands(in, 1e-3, 0), ConfigError);
    CHECK_THROWS_AS(glancing_bands(GlancingInput{-1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0}, 1e-3, 1), ConfigError);
}
