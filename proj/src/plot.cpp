#include "fwopt/plot.hpp"

#include "fwopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace fwopt {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 640.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 440.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
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

struct Axes {
    double t_min, t_max, log_min, log_max;

    double x(double t) const { return kLeft + (t - t_min) / (t_max - t_min) * (kRight - kLeft); }
    double y(double v) const {
        const double lv = v > 0.0 ? std::max(std::log10(v), log_min) : log_min;
        return kBottom - (lv - log_min) / (log_max - log_min) * (kBottom - kTop);
    }
};

Axes fit_axes(const std::vector<AlgorithmBand>& bands) {
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -t_min;
    double v_min = std::numeric_limits<double>::infinity();
    double v_max = 0.0;
    for (const auto& b : bands) {
        for (std::size_t i = 0; i < b.band.checkpoints.size(); ++i) {
            t_min = std::min(t_min, b.band.checkpoints[i]);
            t_max = std::max(t_max, b.band.checkpoints[i]);
            for (double v : {b.band.stats[i].lower, b.band.stats[i].median, b.band.stats[i].upper}) {
                if (v > 0.0) {
                    v_min = std::min(v_min, v);
                    v_max = std::max(v_max, v);
                }
            }
        }
    }
    if (t_max <= t_min) {
        t_min -= 1.0;
        t_max += 1.0;
    }
    if (!(v_max > 0.0)) {
        v_min = 1.0;
        v_max = 1.0;
    }
    double lo = std::floor(std::log10(v_min));
    double hi = std::ceil(std::log10(v_max));
    if (hi <= lo) {
        hi = lo + 1.0;
    }
    return {t_min, t_max, lo, hi};
}

std::string polyline(const Axes& ax, const QuantileBand& band, double QuantileStats::*field) {
    std::string pts;
    for (std::size_t i = 0; i < band.checkpoints.size(); ++i) {
        if (i) {
            pts += ' ';
        }
        pts += num(ax.x(band.checkpoints[i])) + "," + num(ax.y(band.stats[i].*field));
    }
    return pts;
}

} // namespace

std::vector<AlgorithmBand> summarize_bands(const std::vector<SummaryRow>& rows, double delta) {
    if (rows.empty()) {
        throw Error("plot: no summary rows");
    }
    std::vector<std::string> order;
    std::map<std::string, std::map<std::size_t, std::vector<double>>> grouped;
    for (const SummaryRow& r : rows) {
        if (!grouped.count(r.algo)) {
            order.push_back(r.algo);
        }
        grouped[r.algo][r.t].push_back(r.avg_grad_norm);
    }
    std::vector<AlgorithmBand> out;
    for (const std::string& algo : order) {
        AlgorithmBand b{algo, {delta, {}, {}}};
        for (const auto& [t, values] : grouped[algo]) {
            b.band.checkpoints.push_back(static_cast<double>(t));
            b.band.stats.push_back(quantile_band(values, delta));
        }
        out.push_back(std::move(b));
    }
    return out;
}

std::string render_svg(const std::vector<AlgorithmBand>& bands) {
    if (bands.empty()) {
        throw Error("plot: nothing to draw");
    }
    const Axes ax = fit_axes(bands);
    const double delta = bands.front().band.delta;
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\" width=\""
      << kWidth << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    char title[128];
    std::snprintf(title, sizeof title, "average gradient norm: median, %g and %g quantiles", delta, 1.0 - delta);
    s << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"24\" text-anchor=\"middle\">" << title << "</text>\n";

    // Axes, decade grid lines and labels.
    s << "<g stroke=\"#000\" stroke-width=\"1\" fill=\"none\">\n";
    s << "<polyline points=\"" << num(kLeft) << "," << num(kTop) << " " << num(kLeft) << "," << num(kBottom) << " "
      << num(kRight) << "," << num(kBottom) << "\"/>\n";
    s << "</g>\n";
    for (double e = ax.log_min; e <= ax.log_max + 0.5; e += 1.0) {
        const double y = ax.y(std::pow(10.0, e));
        s << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(y) << "\" x2=\"" << num(kRight) << "\" y2=\"" << num(y)
          << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        s << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">1e"
          << static_cast<long>(e) << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double t = ax.t_min + (ax.t_max - ax.t_min) * i / 4.0;
        const double x = ax.x(t);
        char label[32];
        std::snprintf(label, sizeof label, "%g", t);
        s << "<line x1=\"" << num(x) << "\" y1=\"" << num(kBottom) << "\" x2=\"" << num(x) << "\" y2=\""
          << num(kBottom + 5) << "\" stroke=\"#000\" stroke-width=\"1\"/>\n";
        s << "<text x=\"" << num(x) << "\" y=\"" << num(kBottom + 20) << "\" text-anchor=\"middle\">" << label
          << "</text>\n";
    }
    s << "<text x=\"" << num((kLeft + kRight) / 2) << "\" y=\"" << num(kBottom + 45)
      << "\" text-anchor=\"middle\">iteration t</text>\n";

    for (std::size_t k = 0; k < bands.size(); ++k) {
        const QuantileBand& band = bands[k].band;
        const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
        std::string area = polyline(ax, band, &QuantileStats::upper);
        for (std::size_t i = band.checkpoints.size(); i-- > 0;) {
            area += " " + num(ax.x(band.checkpoints[i])) + "," + num(ax.y(band.stats[i].lower));
        }
        s << "<g class=\"band\" data-algo=\"" << escape(bands[k].algo) << "\">\n";
        s << "<polygon points=\"" << area << "\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        s << "<polyline points=\"" << polyline(ax, band, &QuantileStats::lower) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
        s << "<polyline points=\"" << polyline(ax, band, &QuantileStats::upper) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>\n";
        s << "<polyline points=\"" << polyline(ax, band, &QuantileStats::median) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"2\"/>\n";
        s << "</g>\n";

        const double ly = kTop + 10.0 + 22.0 * static_cast<double>(k);
        s << "<line x1=\"660\" y1=\"" << num(ly) << "\" x2=\"690\" y2=\"" << num(ly) << "\" stroke=\"" << color
          << "\" stroke-width=\"2\"/>\n";
        s << "<text x=\"698\" y=\"" << num(ly + 4) << "\">" << escape(bands[k].algo) << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

std::vector<SummaryRow> load_summaries(const std::vector<std::string>& paths) {
    if (paths.empty()) {
        throw Error("plot: no input files");
    }
    std::vector<SummaryRow> rows;
    for (const std::string& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw ParseError(path + ": cannot open");
        }
        try {
            auto part = read_summary_csv(in);
            rows.insert(rows.end(), part.begin(), part.end());
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    return rows;
}

} // namespace fwopt
