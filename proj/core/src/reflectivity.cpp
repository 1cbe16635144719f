#include "sabinelab/reflectivity.hpp"

#include "sabinelab/errors.hpp"

#include <cmath>
#include <limits>

namespace sabinelab::reflect {

namespace {

constexpr double kPi = 3.14159265358979323846;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_component(double xi) { return std::sqrt(std::max(0.0, (1.0 - xi) * (1.0 + xi))); }

}  // namespace

double DeltaPotential::h_sigma(double s) const { return h * amplitude(s) * std::pow(h, alpha_exp); }

void validate(const ReflectivityModel& model) {
    std::visit(overloaded{
                   [](const TransparentObstacle& m) {
                       if (!(m.c > 0.0)) throw ConfigError("transparent: c must be > 0");
                       if (m.c == 1.0) throw ConfigError("transparent: c must differ from 1");
                       if (!(m.alpha > 0.0)) throw ConfigError("transparent: alpha must be > 0");
                   },
                   [](const DeltaPotential& m) {
                       if (!(m.h > 0.0)) throw ConfigError("delta: h must be > 0");
                       if (!(m.alpha_exp >= -1.0 && m.alpha_exp <= 0.0)) {
                           throw ConfigError("delta: exponent alpha must lie in [-1, 0]");
                       }
                       if (!(m.v0 >= 0.0)) throw ConfigError("delta: v0 must be >= 0");
                       if (!std::isfinite(m.h_sigma(0.0))) {
                           throw ConfigError("delta: h * v0 * h^alpha must be finite");
                       }
                   },
                   [](const BoundaryDamping& m) {
                       if (!(m.value(0.0) > 0.0)) throw ConfigError("damping: a must be > 0");
                   },
               },
               model);
}

double wave_speed(const ReflectivityModel& model) {
    if (const auto* t = std::get_if<TransparentObstacle>(&model)) return t->c;
    return 1.0;
}

std::string problem_name(const ReflectivityModel& model) {
    return std::visit(overloaded{
                          [](const TransparentObstacle&) { return std::string("transparent"); },
                          [](const DeltaPotential&) { return std::string("delta"); },
                          [](const BoundaryDamping&) { return std::string("damping"); },
                      },
                      model);
}

cplx branched_sqrt(cplx z) {
    double a = std::arg(z);
    if (a <= -kPi / 2.0) a += 2.0 * kPi;
    return std::polar(std::sqrt(std::abs(z)), a / 2.0);
}

bool is_te(const TransparentObstacle& m) {
    return (m.c < 1.0 && m.alpha < 1.0 / m.c) || (m.c > 1.0 && m.alpha > 1.0 / m.c);
}

cplx reflect(const ReflectivityModel& model, double xi, double s) {
    const double ax = std::abs(xi);
    if (!(ax <= 1.0)) throw ConfigError("reflect: |xi| must be <= 1");
    return std::visit(
        overloaded{
            [&](const TransparentObstacle& m) -> cplx {
                const cplx a = branched_sqrt(cplx((1.0 - ax) * (1.0 + ax), 0.0));
                const cplx b = m.alpha * branched_sqrt(cplx(m.c * m.c - ax * ax, 0.0));
                return (a - b) / (b + a);
            },
            [&](const DeltaPotential& m) -> cplx {
                const double hs = m.h_sigma(s);
                return hs / (cplx(0.0, 2.0 * normal_component(ax)) - hs);
            },
            [&](const BoundaryDamping& m) -> cplx {
                const double e = normal_component(ax);
                const double a = m.value(s);
                if (e == a) return 0.0;
                return (e - a) / (a + e);
            },
        },
        model);
}

std::optional<double> brewster(const TransparentObstacle& m) {
    if (is_te(m) || m.alpha == 1.0) return std::nullopt;
    const double x2 = (1.0 - m.alpha * m.alpha * m.c * m.c) / (1.0 - m.alpha * m.alpha);
    if (!(x2 >= 0.0 && x2 < 1.0) || x2 > m.c * m.c) return std::nullopt;
    return std::sqrt(x2);
}

LogReflectivity log_reflectivity(const ReflectivityModel& model, double xi, double s) {
    const double r = std::abs(reflect(model, xi, s));
    if (r == 0.0) return {-std::numeric_limits<double>::infinity(), true};
    return {2.0 * std::log(r), false};
}

std::optional<double> transmission_zero(const ReflectivityModel& model, double s) {
    if (const auto* t = std::get_if<TransparentObstacle>(&model)) return brewster(*t);
    if (const auto* d = std::get_if<BoundaryDamping>(&model)) {
        const double a = d->value(s);
        if (a <= 1.0) return std::sqrt((1.0 - a) * (1.0 + a));
    }
    return std::nullopt;
}

}  // namespace sabinelab::reflect
