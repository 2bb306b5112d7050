#include "quagd/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

namespace quagd {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "k,residual,inner_rounds,centroid_err,max_node_dev\n";
    for (const auto& s : trace.steps) {
        out << s.k << ',' << format_number(s.residual) << ',' << s.inner_rounds << ','
            << format_number(s.centroid_err) << ',' << format_number(s.max_node_dev) << '\n';
    }
}

void write_sweep_csv(std::ostream& out, const SweepReport& report) {
    out << "delta,plateau,iters_to_plateau,theory_floor\n";
    for (const auto& e : report.entries) {
        out << format_number(e.delta) << ',' << format_number(e.plateau) << ',';
        if (e.error.empty()) {
            out << e.iters_to_plateau;
        } else {
            out << -1;
        }
        out << ',' << format_number(e.theory_floor) << '\n';
    }
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    (void)ec;
    return std::string(buf, ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

void write_log_plot_svg(std::ostream& out, const std::vector<PlotSeries>& series, const std::string& title) {
    double min_pos = std::numeric_limits<double>::infinity();
    double max_val = 0.0;
    std::size_t max_len = 1;
    for (const auto& s : series) {
        max_len = std::max(max_len, s.values.size());
        for (double v : s.values) {
            if (std::isfinite(v) && v > 0.0) {
                min_pos = std::min(min_pos, v);
                max_val = std::max(max_val, v);
            }
        }
    }
    if (!std::isfinite(min_pos)) {
        min_pos = 1e-3;
        max_val = 1.0;
    }
    const double lo = std::floor(std::log10(min_pos));
    const double hi = std::max(lo + 1.0, std::ceil(std::log10(max_val)));
    const double k_max = static_cast<double>(std::max<std::size_t>(max_len - 1, 1));

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double k) { return kLeft + plot_w * k / k_max; };
    auto py = [&](double v) {
        const double lv = std::log10(std::max(v, min_pos));
        return kTop + plot_h * (hi - lv) / (hi - lo);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(title) << "</text>\n";

    for (double e = lo; e <= hi; e += 1.0) {
        const double y = kTop + plot_h * (hi - e) / (hi - lo);
        out << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(y) << "\" x2=\"" << fixed(kLeft + plot_w)
            << "\" y2=\"" << fixed(y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(y + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">1e" << static_cast<int>(e) << "</text>\n";
    }
    const auto k_ticks = static_cast<std::size_t>(k_max);
    const std::size_t k_step = std::max<std::size_t>(1, k_ticks / 10);
    for (std::size_t k = 0; k <= k_ticks; k += k_step) {
        out << "<text x=\"" << fixed(px(static_cast<double>(k))) << "\" y=\"" << fixed(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-size=\"12\">" << k << "</text>\n";
    }
    out << "<rect x=\"" << fixed(kLeft) << "\" y=\"" << fixed(kTop) << "\" width=\"" << fixed(plot_w)
        << "\" height=\"" << fixed(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 16)
        << "\" text-anchor=\"middle\" font-size=\"13\">iteration k</text>\n";
    out << "<text x=\"20\" y=\"" << fixed(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 20 " << fixed(kTop + plot_h / 2) << ")\">error e[k] (log scale)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t k = 0; k < s.values.size(); ++k) {
            if (!std::isfinite(s.values[k])) continue;
            if (k > 0) out << ' ';
            out << fixed(px(static_cast<double>(k))) << ',' << fixed(py(s.values[k]));
        }
        out << "\"/>\n";
        const double ly = kTop + 16.0 + 20.0 * static_cast<double>(i);
        const double lx = kLeft + plot_w + 12.0;
        out << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly - 4) << "\" x2=\"" << fixed(lx + 24)
            << "\" y2=\"" << fixed(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly) << "\" font-size=\"12\">" << escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace quagd
