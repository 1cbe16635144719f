#pragma once

#include "sabinelab/disk.hpp"

#include <string>
#include <utility>
#include <vector>

namespace sabinelab::cli {

enum class Axis { re_lambda, tangent_freq, log_re_lambda, im_lambda, log_neg_im_lambda };

/// Polyline in axis coordinates; a NaN point breaks the line.
struct Overlay {
    std::string label;
    std::string color = "#d62728";
    std::vector<std::pair<double, double>> points;
};

struct FigureSpec {
    Axis x = Axis::re_lambda;
    Axis y = Axis::im_lambda;
    std::string title;
    std::vector<Overlay> overlays;
};

/// One stacked panel per spec.  Throws ConfigError on an empty table.
std::string emit_figure(const std::vector<disk::Resonance>& data, const std::vector<FigureSpec>& panels,
                        const std::string& comment = "");

std::string axis_label(Axis a);

/// Value of a resonance along an axis (NaN when undefined, e.g. log of Im >= 0).
double axis_value(Axis a, const disk::Resonance& r);

}  // namespace sabinelab::cli
