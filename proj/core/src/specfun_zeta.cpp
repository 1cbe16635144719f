#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <cmath>

namespace sabinelab::specfun {

namespace {

// t - atan(t)
double t_minus_atan(double t) {
    if (t > 0.1) return t - std::atan(t);
    const double t2 = t * t;
    double term = t * t2, sum = 0.0;
    for (int k = 1; k < 40; ++k) {
        const double add = ((k % 2) ? 1.0 : -1.0) * term / (2 * k + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        term *= t2;
    }
    return sum;
}

// atanh(s) - s
double atanh_minus(double s) {
    if (s > 0.5) return std::atanh(s) - s;
    const double s2 = s * s;
    double term = s * s2, sum = 0.0;
    for (int k = 1; k < 80; ++k) {
        const double add = term / (2 * k + 1);
        sum += add;
        if (add < 1e-18 * sum) break;
        term *= s2;
    }
    return sum;
}

}  // namespace

double uniform_zeta(double z) {
    if (!(z >= 1e-6 && z <= 1e3)) throw ConfigError("uniform_zeta: z must lie in [1e-6, 1e3]");
    if (z == 1.0) return 0.0;
    if (z > 1.0) {
        const double t = std::sqrt((z - 1.0) * (z + 1.0));
        return -std::pow(1.5 * t_minus_atan(t), 2.0 / 3.0);
    }
    const double s = std::sqrt((1.0 - z) * (1.0 + z));
    // atanh(s) = log((1 + s)/z) loses nothing for tiny z; use it there
    const double g = (z < 1e-3) ? std::log((1.0 + s) / z) - s : atanh_minus(s);
    return std::pow(1.5 * g, 2.0 / 3.0);
}

}  // namespace sabinelab::specfun
