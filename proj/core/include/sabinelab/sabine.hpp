#pragma once

#include "sabinelab/billiards.hpp"
#include "sabinelab/reflectivity.hpp"

#include <vector>

namespace sabinelab::sabine {

using billiards::ConvexDomain;
using billiards::PhasePoint;
using reflect::ReflectivityModel;

/// r_N / (2 c^{-1} l_N); c = 1 for the delta and damping problems.
struct Quotient {
    double value = 0.0;
    bool total_transmission = false;  ///< some r(beta^j q) = 0; value is -inf
};

Quotient sabine_quotient(const ConvexDomain& domain, const ReflectivityModel& model, PhasePoint q,
                         int n);

/// Quotients for N = 1..n_max along a single orbit (entry N-1).
std::vector<Quotient> sabine_quotients(const ConvexDomain& domain, const ReflectivityModel& model,
                                       PhasePoint q, int n_max);

struct GridSpec {
    int points = 257;       ///< initial xi samples
    int footpoints = 0;     ///< boundary samples; 0 picks 1 on the disk and 48 otherwise
    double collar = 1e-3;   ///< grid keeps |xi| <= 1 - collar
    double brewster_half_width = 1e-3;
    double refine_tol = 1e-3;
    int max_doublings = 6;
    int workers = 0;        ///< 0 = hardware concurrency
};

/// Theorem-style glancing collar h^eps.
double theorem_collar(double h, double eps = 0.2);

struct NExtrema {
    int n = 0;
    double min = 0.0, max = 0.0;
    PhasePoint argmin, argmax;
};

struct SabineBand {
    double lower = 0.0;  ///< max over N of the grid minimum
    double upper = 0.0;  ///< min over N of the grid maximum
    int n_max = 0;
    int xi_points = 0;   ///< final xi resolution after refinement
    int footpoints = 0;
    double collar = 0.0;
    double wave_speed = 1.0;
    std::vector<NExtrema> per_n;
};

SabineBand sabine_bounds(const ConvexDomain& domain, const ReflectivityModel& model, int n_max,
                         const GridSpec& grid = {});

/// xi -> 1 limit of the N = 1 quotient at footpoint s for a transparent
/// obstacle: c * (-kappa(s) / (alpha sqrt(c^2 - 1))) for c > 1, 0 for c < 1.
double glancing_limit(const ConvexDomain& domain, const reflect::TransparentObstacle& model,
                      double s);

struct Extrapolation {
    double estimate = 0.0;
    double error = 0.0;
};

/// Richardson extrapolation in sqrt(1 - xi^2) of the N = 1 quotient sampled at
/// xi = 1 - 10^{-k}, k = 2..6.
Extrapolation glancing_extrapolation(const ConvexDomain& domain, const ReflectivityModel& model,
                                     double s);

/// Data of the glancing band formula.  Q is the boundary curvature form at
/// glancing, v0 the amplitude of sigma(V) / h^alpha_exp.
struct GlancingInput {
    double alpha_exp = -1.0;
    double v0_min = 1.0, v0_max = 1.0;
    double q_min = 1.0, q_max = 1.0;
    double a1 = 0.0;
    double im_v1 = 0.0;  ///< sigma(h Im V_1)
};

struct GlancingBand {
    int j = 0;
    double zeta_j = 0.0;
    double im_phi = 0.0;
    double b_min = 0.0, b_max = 0.0;
    double im_lambda_min = 0.0, im_lambda_max = 0.0;  ///< at the requested h
    bool gap_below = false;  ///< pinching criterion against band j+1
};

/// (Q/|sigma(hV)|^2) ((2hQ)^{1/3}(1 + a1) Im Phi_-(zeta_j) + sigma(h Im V_1)),
/// the predicted Im lambda of band j at a single (Q, v0).
double predicted_im_lambda(const GlancingInput& in, double im_phi, double h, double q, double v0);

std::vector<GlancingBand> glancing_bands(const GlancingInput& in, double h, int m_bands);

/// Log-log slope of band j against Re lambda when h = 1/Re lambda: 2 + 2 alpha - 1/3.
double band_slope(double alpha_exp);

/// Im lambda / ((Re lambda)^{5/3 + 2 alpha} Im Phi_-(zeta_j)); lies in
/// [B_min, B_max] on band j asymptotically.
double band_ratio(double re_lambda, double im_lambda, double alpha_exp, double im_phi);

}  // namespace sabinelab::sabine
