#include "sabinelab_cli/figure.hpp"

#include "sabinelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sabinelab::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kPanelHeight = 340.0;
constexpr double kLeft = 70.0, kRight = 150.0, kTop = 36.0, kBottom = 48.0;
constexpr std::size_t kMaxBytes = 2u << 20;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

struct Range {
    double lo = INFINITY, hi = -INFINITY;
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            const double d = std::max(1.0, std::abs(lo)) * 0.05;
            lo -= d;
            hi += d;
        }
        const double d = 0.04 * (hi - lo);
        lo -= d;
        hi += d;
    }
};

void panel(std::ostringstream& os, const std::vector<disk::Resonance>& data, const FigureSpec& spec, double y0) {
    Range rx, ry;
    for (const auto& r : data) {
        rx.add(axis_value(spec.x, r));
        ry.add(axis_value(spec.y, r));
    }
    // overlays widen y only inside the data's x range
    for (const Overlay& o : spec.overlays) {
        for (auto [x, y] : o.points) {
            if (x >= rx.lo && x <= rx.hi) ry.add(y);
        }
    }
    rx.pad();
    ry.pad();
    const double pw = kWidth - kLeft - kRight, ph = kPanelHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
    auto py = [&](double y) { return y0 + kTop + (ry.hi - y) / (ry.hi - ry.lo) * ph; };

    os << "<g>\n<text x=\"" << num(kLeft) << "\" y=\"" << num(y0 + 22) << "\" font-size=\"14\">" << spec.title
       << "</text>\n";
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(y0 + kTop) << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"#000\"/>\n";
    for (int i = 0; i < 5; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0, fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        os << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(y0 + kTop + ph) << "\" x2=\"" << num(px(fx))
           << "\" y2=\"" << num(y0 + kTop + ph + 5) << "\" stroke=\"#000\"/>"
           << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(y0 + kTop + ph + 18)
           << "\" font-size=\"11\" text-anchor=\"middle\">" << tick(fx) << "</text>\n";
        os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(kLeft)
           << "\" y2=\"" << num(py(fy)) << "\" stroke=\"#000\"/>"
           << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(fy) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << tick(fy) << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(y0 + kPanelHeight - 8)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << axis_label(spec.x) << "</text>\n";
    os << "<text transform=\"translate(16," << num(y0 + kTop + ph / 2)
       << ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\">" << axis_label(spec.y) << "</text>\n";

    os << "<clipPath id=\"clip" << static_cast<int>(y0) << "\"><rect x=\"" << num(kLeft) << "\" y=\""
       << num(y0 + kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph) << "\"/></clipPath>\n";
    os << "<g clip-path=\"url(#clip" << static_cast<int>(y0) << ")\">\n";
    for (const auto& r : data) {
        const double x = axis_value(spec.x, r), y = axis_value(spec.y, r);
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        os << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
           << "\" r=\"2.5\" fill=\"none\" stroke=\"#1f5fbf\"/>\n";
    }
    for (const Overlay& o : spec.overlays) {
        std::string path;
        bool pen = false;
        for (auto [x, y] : o.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) {
                pen = false;
                continue;
            }
            path += (pen ? " L" : " M") + num(px(x)) + " " + num(py(y));
            pen = true;
        }
        if (!path.empty()) {
            os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << o.color << "\" stroke-width=\"1.5\"/>\n";
        }
    }
    os << "</g>\n";
    double ly = y0 + kTop + 8;
    for (const Overlay& o : spec.overlays) {
        if (o.label.empty()) continue;
        os << "<line x1=\"" << num(kWidth - kRight + 10) << "\" y1=\"" << num(ly) << "\" x2=\""
           << num(kWidth - kRight + 30) << "\" y2=\"" << num(ly) << "\" stroke=\"" << o.color
           << "\" stroke-width=\"1.5\"/><text x=\"" << num(kWidth - kRight + 34) << "\" y=\"" << num(ly + 4)
           << "\" font-size=\"10\">" << o.label << "</text>\n";
        ly += 16;
    }
    os << "</g>\n";
}

}  // namespace

std::string axis_label(Axis a) {
    switch (a) {
        case Axis::re_lambda: return "Re λ";
        case Axis::tangent_freq: return "n / Re λ";
        case Axis::log_re_lambda: return "log10 Re λ";
        case Axis::im_lambda: return "Im λ";
        case Axis::log_neg_im_lambda: return "log10(−Im λ)";
    }
    return "";
}

double axis_value(Axis a, const disk::Resonance& r) {
    switch (a) {
        case Axis::re_lambda: return r.lambda.real();
        case Axis::tangent_freq: return r.tangent_freq;
        case Axis::log_re_lambda: return r.lambda.real() > 0.0 ? std::log10(r.lambda.real()) : NAN;
        case Axis::im_lambda: return r.lambda.imag();
        case Axis::log_neg_im_lambda: return r.lambda.imag() < 0.0 ? std::log10(-r.lambda.imag()) : NAN;
    }
    return NAN;
}

std::string emit_figure(const std::vector<disk::Resonance>& data, const std::vector<FigureSpec>& panels,
                        const std::string& comment) {
    if (data.empty()) throw ConfigError("plot: resonance table is empty");
    if (panels.empty()) throw ConfigError("plot: no panels requested");
    std::ostringstream os;
    const double height = kPanelHeight * static_cast<double>(panels.size());
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) os << "<!-- " << comment << " -->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\"" << num(height)
       << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(height) << "\" font-family=\"sans-serif\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
    for (std::size_t i = 0; i < panels.size(); ++i) panel(os, data, panels[i], kPanelHeight * static_cast<double>(i));
    os << "</svg>\n";
    std::string s = os.str();
    if (s.size() > kMaxBytes) throw ConfigError("plot: figure exceeds 2 MB; narrow the window");
    return s;
}

}  // namespace sabinelab::cli
