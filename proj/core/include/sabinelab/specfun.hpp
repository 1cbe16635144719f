#pragma once

#include <complex>
#include <vector>

namespace sabinelab::specfun {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct AiryPair {
    cplx value;
    cplx derivative;
};

/// Ai(z), Ai'(z) for |z| <= 1e4.  Throws ScaledOverflow when |Ai| exceeds
/// the double range; values below the underflow threshold come back as 0.
AiryPair airy(cplx z);

/// (A_-(z), A_-'(z)) with A_-(z) = Ai(e^{2 pi i/3} z).
AiryPair airy_minus(cplx z);

/// Phi_-(z) = A_-'(z) / A_-(z).
cplx phi_minus(cplx z);

struct AiryZeroTable {
    std::vector<double> zeros;         ///< zeta_1 > zeta_2 > ... (all negative)
    std::vector<double> im_phi_minus;  ///< Im Phi_-(zeta_j), evaluated directly
};

/// First `count` zeros of Ai, 1 <= count <= 100.
AiryZeroTable airy_zeros(int count);

/// -1 / (8 pi^2 |A_-(zeta)|^3 |Ai'(zeta)|), the closed form of Im Phi_- at a zero of Ai.
double im_phi_minus_closed_form(double zeta);

struct BesselQuad {
    cplx j;
    cplx j_prime;
    cplx h1;
    cplx h1_prime;
    int order = 0;
    cplx argument;
};

/// J_n, J_n', H_n^(1), H_n^(1)' for integer n and Re z > 0.  Supported box:
/// |n| <= 20000, 1 <= |z| <= 20000, |Im z| <= 50.  Throws ScaledOverflow if
/// any member leaves the double range.
BesselQuad bessel_quad(int n, cplx z);

/// Bessel values kept as mantissa * exp(log_scale).  J and J' share one
/// scale, H and H' another.
struct ScaledBesselQuad {
    cplx j;
    cplx j_prime;
    double log_j = 0.0;
    cplx h1;
    cplx h1_prime;
    double log_h = 0.0;
};

ScaledBesselQuad bessel_quad_scaled(int n, cplx z);

/// Only J_n, J_n' (cheaper; no Hankel recurrence).
ScaledBesselQuad bessel_j_scaled(int n, cplx z);

/// Leading-order uniform (Airy-type) forms of J_n(n w), H_n^(1)(n w) and their
/// derivatives for real w > 0.  Accuracy O(1/n); for verification only.
BesselQuad bessel_uniform_leading(int n, double w);

/// The smooth solution of (d zeta/dz)^2 = (1 - z^2) / (zeta z^2) with
/// zeta(1) = 0, for 1e-6 <= z <= 1e3.  Positive for z < 1, negative for z > 1.
double uniform_zeta(double z);

struct FriedlanderSymbols {
    double psi_s;
    cplx psi_ds;
    double psi_d;
};

/// Layer-operator symbols of the Friedlander model, -30 <= x <= 10.
FriedlanderSymbols friedlander_symbols(double x);

}  // namespace sabinelab::specfun
