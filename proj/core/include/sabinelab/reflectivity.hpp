#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace sabinelab::reflect {

using cplx = std::complex<double>;

/// Interior wave speed c (c != 1) and transmission coupling alpha > 0.
struct TransparentObstacle {
    double c = 2.0;
    double alpha = 1.0;
};

/// Boundary delta potential with symbol v0(s) * h^alpha_exp, alpha_exp in [-1, 0].
struct DeltaPotential {
    double v0 = 1.0;
    double alpha_exp = -1.0;
    double h = 1e-3;
    /// Optional position dependence; overrides v0 when set.
    std::function<double(double)> v0_profile;

    double amplitude(double s) const { return v0_profile ? v0_profile(s) : v0; }
    /// h * sigma(V) at boundary point s.
    double h_sigma(double s) const;
};

/// Boundary damping coefficient a(s) >= a_0 > 0.
struct BoundaryDamping {
    double a = 1.0;
    std::function<double(double)> a_profile;

    double value(double s) const { return a_profile ? a_profile(s) : a; }
};

using ReflectivityModel = std::variant<TransparentObstacle, DeltaPotential, BoundaryDamping>;

/// Throws ConfigError naming the violated invariant.
void validate(const ReflectivityModel& model);

/// Wave speed used in the Sabine quotient: c for transparent obstacles, 1 otherwise.
double wave_speed(const ReflectivityModel& model);

std::string problem_name(const ReflectivityModel& model);

/// sqrt(|z|) e^{i Arg(z)/2} with Arg(z) in (-pi/2, 3pi/2].
cplx branched_sqrt(cplx z);

/// |r| bounded below ((c<1 and alpha<1/c) or (c>1 and alpha>1/c)).
bool is_te(const TransparentObstacle& m);

/// Reflection coefficient at tangential frequency xi and arclength position s.
cplx reflect(const ReflectivityModel& model, double xi, double s = 0.0);

/// Tangential frequency with r = 0, when it exists in (0, 1) and outside total
/// internal reflection.
std::optional<double> brewster(const TransparentObstacle& m);

/// log|r|^2 with an explicit marker for r = 0 instead of -inf.
struct LogReflectivity {
    double value = 0.0;
    bool total_transmission = false;
};

LogReflectivity log_reflectivity(const ReflectivityModel& model, double xi, double s = 0.0);

/// Tangential frequencies where r vanishes for this model at position s:
/// the Brewster point of a TM obstacle, or xi with sqrt(1 - xi^2) = a(s).
std::optional<double> transmission_zero(const ReflectivityModel& model, double s = 0.0);

}  // namespace sabinelab::reflect
