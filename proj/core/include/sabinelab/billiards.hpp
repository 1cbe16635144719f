#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

namespace sabinelab::billiards {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Point of the open coball bundle: arclength s (mod perimeter) and
/// tangential frequency xi, |xi| < 1.  xi > 0 points along increasing s.
struct PhasePoint {
    double s = 0.0;
    double xi = 0.0;
};

/// Smooth strictly convex closed curve, counter-clockwise, parametrized by
/// arclength.  Immutable and cheap to copy.
class ConvexDomain {
public:
    static ConvexDomain disk(double radius = 1.0);
    static ConvexDomain ellipse(double a, double b);
    /// Boundary from a support function p(theta) (outward normal angle theta)
    /// with p + p'' > 0.
    static ConvexDomain from_support_function(std::function<double(double)> p,
                                              std::function<double(double)> dp,
                                              std::function<double(double)> ddp);

    double perimeter() const;
    Vec2 point(double s) const;
    Vec2 tangent(double s) const;
    /// Inward unit normal (left of the tangent).
    Vec2 normal(double s) const;
    double curvature(double s) const;
    double min_curvature() const;
    double max_curvature() const;
    /// Arclength position of the point of maximal / minimal curvature on a
    /// 4096-point sampling grid.
    double argmax_curvature() const;
    double argmin_curvature() const;

    struct Impl;
    const Impl& impl() const { return *impl_; }

private:
    explicit ConvexDomain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

struct StepResult {
    PhasePoint next;
    double chord = 0.0;
};

/// Billiard ball map.  Throws GlancingError for |xi| >= 1 - 1e-12.
StepResult billiard_step(const ConvexDomain& domain, PhasePoint q);

struct OrbitSegment {
    std::vector<PhasePoint> points;  ///< q, beta(q), ..., beta^N(q)
    std::vector<double> chords;      ///< chords[k] joins points[k] and points[k+1]
};

OrbitSegment orbit(const ConvexDomain& domain, PhasePoint q, int n);

/// l_N: mean of the chords.
double mean_chord(const OrbitSegment& orbit);

/// CSV rows (k, s, xi, chord); chord is the segment arriving at point k.
void write_orbit_csv(std::ostream& os, const OrbitSegment& orbit);

struct GlancingReport {
    std::vector<double> one_minus_xi;
    std::vector<double> normal_remainder;  ///< |sqrt(1-xi'^2) - sqrt(1-xi^2)|
    std::vector<double> chord_remainder;   ///< |l - (2/kappa) sqrt(1-xi^2)|
    /// Fitted exponent p of remainder ~ C (1 - xi^2)^p; +inf when the remainder
    /// vanishes to rounding on the whole sequence.
    double normal_exponent = 0.0;
    double chord_exponent = 0.0;
    bool passes(double min_exponent = 0.9) const {
        return normal_exponent >= min_exponent && chord_exponent >= min_exponent;
    }
};

/// Near-glancing expansions at footpoint s.  Empty `one_minus_xi` selects 13
/// log-spaced values from 1e-1 to 1e-4.
GlancingReport glancing_expansion_check(const ConvexDomain& domain, double s,
                                        std::vector<double> one_minus_xi = {});

/// Finite-difference Jacobian determinant of beta in (s, xi) coordinates.
double jacobian_determinant(const ConvexDomain& domain, PhasePoint q, double step = 1e-5);

}  // namespace sabinelab::billiards
