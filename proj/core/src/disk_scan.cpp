#include "sabinelab/disk.hpp"

#include "sabinelab/errors.hpp"
#include "sabinelab/specfun.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <thread>

namespace sabinelab::disk {

namespace {

constexpr double kPi = specfun::kPi;
constexpr int kBlock = 8;
constexpr double kDedup = 1e-6;

using Gauss = boost::math::quadrature::gauss<double, 64>;

struct Rect {
    double re_lo, re_hi, im_lo, im_hi;
    bool contains(cplx z) const {
        return z.real() >= re_lo && z.real() < re_hi && z.imag() >= im_lo && z.imag() < im_hi;
    }
};

SecularProblem frozen_at(const SecularProblem& problem, double re) {
    if (const auto* d = std::get_if<Delta>(&problem)) return freeze(*d, re);
    return problem;
}

class ModeScanner {
public:
    ModeScanner(const SecularProblem& pr, int n, std::atomic<long>& evals)
        : pr_(pr), n_(n), evals_(evals) {}

    cplx log_derivative(cplx z) const {
        evals_.fetch_add(1, std::memory_order_relaxed);
        const NormalizedSecular s = secular_normalized(pr_, n_, z);
        return s.f_prime / s.f;
    }

    cplx segment(cplx a, cplx b) const {
        const cplx half = 0.5 * (b - a), mid = 0.5 * (a + b);
        const auto& x = Gauss::abscissa();
        const auto& w = Gauss::weights();
        cplx sum = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double wi = w[i];
            if (x[i] == 0.0) {
                sum += wi * log_derivative(mid);
            } else {
                sum += wi * (log_derivative(mid + x[i] * half) + log_derivative(mid - x[i] * half));
            }
        }
        return sum * half;
    }

    cplx adaptive(cplx a, cplx b, cplx whole, int depth) const {
        const cplx m = 0.5 * (a + b);
        const cplx l = segment(a, m), r = segment(m, b);
        if (std::abs(l + r - whole) < 1e-8 || depth >= 8) return l + r;
        return adaptive(a, m, l, depth + 1) + adaptive(m, b, r, depth + 1);
    }

    // count and whether it is integral to 1e-3
    std::pair<int, bool> count(const Rect& c, bool refine) const {
        const cplx z[4] = {{c.re_lo, c.im_lo}, {c.re_hi, c.im_lo}, {c.re_hi, c.im_hi}, {c.re_lo, c.im_hi}};
        cplx total = 0.0;
        for (int k = 0; k < 4; ++k) {
            const cplx a = z[k], b = z[(k + 1) % 4];
            const cplx s = segment(a, b);
            total += refine ? adaptive(a, b, s, 0) : s;
        }
        const cplx raw = total / cplx(0.0, 2.0 * kPi);
        const double k = std::round(raw.real());
        return {static_cast<int>(k), std::abs(raw - k) < 1e-3 && k >= 0.0};
    }

private:
    const SecularProblem& pr_;
    int n_;
    std::atomic<long>& evals_;
};

// psi(s) = sqrt(s^2 - n^2) - n arccos(n/s) - pi/4 matched to
// psi = -(i/2) Log R(s) + m pi
std::vector<cplx> wkb_seeds(int n, double lo, double hi, const std::function<cplx(double, double)>& rfun) {
    std::vector<cplx> out;
    const double s_lo = std::max(lo, n * (1.0 + 1e-6) + 1e-6);
    if (!(hi > s_lo)) return out;
    auto e_of = [&](double s) { return std::sqrt(std::max(0.0, 1.0 - double(n) * n / (s * s))); };
    auto psi = [&](double s) {
        const double nn = n;
        return std::sqrt(std::max(0.0, s * s - nn * nn)) - nn * std::acos(std::min(1.0, nn / s)) - kPi / 4.0;
    };
    const int m_lo = static_cast<int>(std::floor(psi(s_lo) / kPi)) - 1;
    const int m_hi = static_cast<int>(std::ceil(psi(hi) / kPi)) + 1;
    for (int m = m_lo; m <= m_hi; ++m) {
        auto f = [&](double s) { return psi(s) - 0.5 * std::arg(rfun(s, e_of(s))) - m * kPi; };
        const double fa = f(s_lo), fb = f(hi);
        if (!(fa < 0.0 && fb > 0.0)) continue;
        std::uintmax_t it = 100;
        const auto br = boost::math::tools::toms748_solve(f, s_lo, hi, fa, fb,
                                                          boost::math::tools::eps_tolerance<double>(40), it);
        const double s = 0.5 * (br.first + br.second);
        if (std::abs(f(s)) > 1e-6) continue;  // branch jump of arg R
        const double e = e_of(s);
        const cplx r = rfun(s, e);
        out.emplace_back(s, -0.5 * std::log(std::abs(r)) / std::max(e, 1e-3));
    }
    return out;
}

struct Seed {
    cplx z;
    SeedKind kind;
    double eps;
};

std::vector<Seed> mode_seeds(const SecularProblem& problem, int n, double lo, double hi, double floor) {
    std::vector<Seed> seeds;
    auto push = [&](cplx z, SeedKind k, double eps) {
        if (!std::isfinite(z.imag())) z.imag(floor - 1.0);
        z.imag(std::max(z.imag(), floor - 1.0));
        if (z.real() > 0.0) seeds.push_back({z, k, eps});
    };
    if (const auto* t = std::get_if<Transparent>(&problem)) {
        if (t->alpha * t->c != 1.0) {
            const double step = t->c * kPi;
            const cplx z0 = seed_normal(*t, n, 0);
            const int k_lo = static_cast<int>(std::floor((lo - z0.real()) / step));
            const int k_hi = static_cast<int>(std::ceil((hi - z0.real()) / step));
            for (int k = k_lo; k <= k_hi; ++k) {
                const cplx z = seed_normal(*t, n, k);
                if (z.real() >= lo && z.real() <= hi && t->c * n <= 0.5 * z.real()) {
                    push(z, SeedKind::normal, 1.0);
                }
            }
        }
        const double s0 = std::max(1.0, t->c);
        if (n >= 1 && hi / n > s0) {
            auto big_g = [&](double s) {
                return std::sqrt(s * s / (t->c * t->c) - 1.0) - std::acos(t->c / s);
            };
            const double sa = std::max(s0, lo / n), sb = hi / n;
            const int k_lo = static_cast<int>(std::floor(-n * big_g(sb) / kPi)) - 1;
            const int k_hi = static_cast<int>(std::ceil(-n * big_g(sa) / kPi)) + 1;
            for (int k = k_lo; k <= k_hi; ++k) {
                for (double r : transverse_roots(*t, n, k)) {
                    if (n * r >= lo && n * r <= hi) push(transverse_lambda(*t, n, r), SeedKind::transverse, 1.5);
                }
            }
        }
    } else if (const auto* d = std::get_if<Delta>(&problem)) {
        const Delta dd = *d;
        for (cplx z : wkb_seeds(n, lo, hi, [dd](double s, double e) {
                 return cplx(0.0, 2.0 * s * e / dd.potential(cplx(s, 0.0))) - 1.0;
             })) {
            push(z, n == 0 ? SeedKind::normal : SeedKind::transverse, 1.5);
        }
        if (n >= 1) {
            const specfun::AiryZeroTable zt = specfun::airy_zeros(8);
            const double scale = std::cbrt(n / 2.0);
            for (int j = 0; j < 8; ++j) {
                const double re0 = n - zt.zeros[j] * scale;
                if (re0 < lo || re0 > hi) continue;
                const double h = 1.0 / re0;
                const double hv = h * d->potential(cplx(re0, 0.0));
                push({re0, std::cbrt(2.0 * h) * zt.im_phi_minus[j] / (hv * hv)}, SeedKind::glancing,
                     0.5 * scale);
            }
        }
    } else {
        const double a = std::get<Damping>(problem).a;
        for (cplx z : wkb_seeds(n, lo, hi, [a](double, double e) { return cplx((e + a) / (e - a), 0.0); })) {
            push(z, n == 0 ? SeedKind::normal : SeedKind::transverse, 1.5);
        }
    }
    return seeds;
}

bool is_new(const std::vector<Resonance>& have, cplx z) {
    return std::none_of(have.begin(), have.end(),
                        [&](const Resonance& r) { return std::abs(r.lambda - z) <= kDedup; });
}

struct ModeResult {
    std::vector<Resonance> roots;
    std::vector<CellReport> incomplete;
};

class CellSolver {
public:
    CellSolver(const SecularProblem& pr, int n, int max_depth, std::atomic<long>& evals)
        : pr_(pr), n_(n), max_depth_(max_depth), scanner_(pr, n, evals) {}

    void try_seed(const Seed& s, const Rect& box, std::vector<Resonance>& found) const {
        try {
            Resonance r = newton_refine(pr_, n_, s.z, s.eps, s.kind);
            if (box.contains(r.lambda) && is_new(found, r.lambda)) found.push_back(std::move(r));
        } catch (const Error&) {
        }
    }

    void solve(const Rect& box, std::vector<Resonance>& found, ModeResult& out, int depth) const {
        std::pair<int, bool> c{0, false};
        try {
            c = scanner_.count(box, false);
            if (!c.second) c = scanner_.count(box, true);
        } catch (const Error&) {
            c.second = false;
        }
        auto inside = [&] {
            return static_cast<int>(std::count_if(found.begin(), found.end(), [&](const Resonance& r) {
                return box.contains(r.lambda);
            }));
        };
        if (c.second && inside() < c.first) {
            const double dx = box.re_hi - box.re_lo, dy = box.im_hi - box.im_lo;
            const double eps = std::hypot(dx, dy);
            for (int i = 0; i < 5 && inside() < c.first; ++i) {
                for (int j = 0; j < 3 && inside() < c.first; ++j) {
                    const cplx z(box.re_lo + (i + 0.5) * dx / 5.0, box.im_lo + (j + 0.5) * dy / 3.0);
                    try_seed({z, SeedKind::subdivision, eps}, box, found);
                }
            }
        }
        if (c.second && inside() == c.first) return;
        if (depth >= max_depth_) {
            out.incomplete.push_back({n_, box.re_lo, box.re_hi, box.im_lo, box.im_hi, c.second ? c.first : -1,
                                      inside()});
            return;
        }
        // off-center split so that repeated splits do not reuse edges
        const double xs = box.re_lo + 0.5137 * (box.re_hi - box.re_lo);
        const double ys = box.im_lo + 0.4887 * (box.im_hi - box.im_lo);
        const Rect kids[4] = {{box.re_lo, xs, box.im_lo, ys},
                              {xs, box.re_hi, box.im_lo, ys},
                              {box.re_lo, xs, ys, box.im_hi},
                              {xs, box.re_hi, ys, box.im_hi}};
        for (const Rect& k : kids) solve(k, found, out, depth + 1);
    }

private:
    const SecularProblem& pr_;
    int n_;
    int max_depth_;
    ModeScanner scanner_;
};

ModeResult scan_mode(const SecularProblem& problem, int n, const ScanWindow& w, const ScanOptions& opt,
                     const std::vector<Resonance>& previous, std::atomic<long>& evals) {
    ModeResult out;
    const int cols = std::max(1, static_cast<int>(std::ceil((w.re_max - w.re_min) / opt.cell_width)));
    const double width = (w.re_max - w.re_min) / cols;
    const std::vector<Seed> seeds = mode_seeds(problem, n, w.re_min - 2.0, w.re_max + 2.0, w.im_floor);
    const bool is_delta = std::holds_alternative<Delta>(problem);
    for (int c = 0; c < cols; ++c) {
        const Rect box{w.re_min + c * width, c + 1 == cols ? w.re_max : w.re_min + (c + 1) * width, w.im_floor,
                       w.im_ceiling};
        const SecularProblem pr = frozen_at(problem, 0.5 * (box.re_lo + box.re_hi));
        CellSolver solver(pr, n, opt.max_depth, evals);
        std::vector<Resonance> found;
        for (const Seed& s : seeds) {
            if (s.z.real() >= box.re_lo - 1.0 && s.z.real() <= box.re_hi + 1.0) solver.try_seed(s, box, found);
        }
        for (const Resonance& p : previous) {
            if (p.lambda.real() >= box.re_lo - 1.0 && p.lambda.real() <= box.re_hi + 1.0) {
                solver.try_seed({p.lambda, SeedKind::continuation, 3.0}, box, found);
            }
        }
        solver.solve(box, found, out, 0);
        for (Resonance& r : found) {
            if (is_delta) {
                try {
                    r = newton_refine(problem, n, r.lambda, 0.5, r.seed);
                } catch (const Error&) {
                }
            }
            r.problem = problem_name(problem);
            if (r.lambda.imag() < 0.0 && is_new(out.roots, r.lambda)) out.roots.push_back(std::move(r));
        }
    }
    return out;
}

}  // namespace

cplx count_zeros(const SecularProblem& problem, int n, double re_lo, double re_hi, double im_lo, double im_hi) {
    if (!(re_lo < re_hi && im_lo < im_hi)) throw ConfigError("count_zeros: empty rectangle");
    std::atomic<long> evals{0};
    const SecularProblem pr = frozen_at(problem, 0.5 * (re_lo + re_hi));
    ModeScanner m(pr, n, evals);
    const cplx z[4] = {{re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}};
    cplx total = 0.0;
    for (int k = 0; k < 4; ++k) {
        const cplx a = z[k], b = z[(k + 1) % 4];
        total += m.adaptive(a, b, m.segment(a, b), 0);
    }
    return total / cplx(0.0, 2.0 * kPi);
}

ScanResult scan(const SecularProblem& problem, const ScanWindow& window, const ScanOptions& options) {
    validate(problem);
    if (!(window.re_min > 0.0 && window.re_max > window.re_min)) {
        throw ConfigError("scan: need 0 < re_min < re_max");
    }
    if (!(window.im_floor < 0.0 && window.im_ceiling > window.im_floor)) {
        throw ConfigError("scan: need im_floor < 0 and im_ceiling > im_floor");
    }
    if (!(options.cell_width > 0.0)) throw ConfigError("scan: cell width must be > 0");
    const int n_max = window.n_max >= 0 ? window.n_max : static_cast<int>(std::ceil(1.2 * window.re_max));
    if (window.n_min < 0 || n_max < window.n_min) throw ConfigError("scan: need 0 <= n_min <= n_max");

    const int blocks = (n_max - window.n_min) / kBlock + 1;
    std::vector<ModeResult> per_block(blocks);
    std::atomic<int> next{0};
    std::atomic<long> evals{0};
    std::vector<std::exception_ptr> errors(blocks);

    auto worker = [&] {
        for (int b; (b = next.fetch_add(1)) < blocks;) {
            try {
                std::vector<Resonance> prev;
                ModeResult& acc = per_block[b];
                const int first = window.n_min + b * kBlock;
                const int last = std::min(n_max, first + kBlock - 1);
                for (int n = first; n <= last; ++n) {
                    ModeResult m = scan_mode(problem, n, window, options, prev, evals);
                    prev = m.roots;
                    acc.roots.insert(acc.roots.end(), m.roots.begin(), m.roots.end());
                    acc.incomplete.insert(acc.incomplete.end(), m.incomplete.begin(), m.incomplete.end());
                }
            } catch (...) {
                errors[b] = std::current_exception();
            }
        }
    };
    unsigned nw = options.workers > 0 ? static_cast<unsigned>(options.workers) : std::thread::hardware_concurrency();
    nw = std::max(1u, std::min<unsigned>(nw, static_cast<unsigned>(blocks)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    ScanResult res;
    for (auto& b : per_block) {
        res.resonances.insert(res.resonances.end(), b.roots.begin(), b.roots.end());
        res.incomplete.insert(res.incomplete.end(), b.incomplete.begin(), b.incomplete.end());
    }
    std::stable_sort(res.resonances.begin(), res.resonances.end(), [](const Resonance& a, const Resonance& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.n < b.n;
    });
    res.evaluations = evals.load();
    return res;
}

void write_resonance_csv(std::ostream& os, const std::vector<Resonance>& rows) {
    os << "problem,n,re_lambda,im_lambda,residual,seed,tangent_freq\n";
    const auto flags = os.flags();
    const auto prec = os.precision();
    for (const Resonance& r : rows) {
        os << r.problem << ',' << r.n << ',' << std::setprecision(12) << r.lambda.real() << ','
           << r.lambda.imag() << ',' << std::setprecision(3) << std::scientific << r.residual
           << std::defaultfloat << ',' << seed_name(r.seed) << ',' << std::setprecision(8) << r.tangent_freq
           << '\n';
    }
    os.flags(flags);
    os.precision(prec);
}

}  // namespace sabinelab::disk
