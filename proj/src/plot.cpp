#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "zetacorr/errors.hpp"
#include "zetacorr/harness.hpp"

namespace zetacorr {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string f2(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// Panel geometry in SVG user units.
constexpr double kWidth = 640.0, kPanelH = 260.0, kLeft = 70.0, kRight = 20.0, kTop = 30.0, kBottom = 40.0;

struct Axis {
    double lo = 0.0, hi = 1.0;
    double map(double v, double a, double b) const { return hi > lo ? a + (v - lo) / (hi - lo) * (b - a) : 0.5 * (a + b); }
};

// Non-positive values cannot go on a log axis; they are clamped to the smallest
// positive value in the series (or 1) and flagged in data-clamped.
double log_value(double v, double floor_v) { return std::log10(v > 0.0 ? v : floor_v); }

void panel(std::string& s, const std::vector<CurveRow>& rows, double CurveRow::*field, const char* name,
           const char* colour, double y0) {
    double floor_v = 1.0;
    bool any = false;
    for (const auto& r : rows)
        if (r.*field > 0.0 && (!any || r.*field < floor_v)) {
            floor_v = r.*field;
            any = true;
        }
    Axis x, y;
    x.lo = x.hi = rows.front().delta;
    y.lo = y.hi = log_value(rows.front().*field, floor_v);
    for (const auto& r : rows) {
        x.lo = std::min(x.lo, r.delta);
        x.hi = std::max(x.hi, r.delta);
        const double ly = log_value(r.*field, floor_v);
        y.lo = std::min(y.lo, ly);
        y.hi = std::max(y.hi, ly);
    }
    if (y.hi - y.lo < 1e-12) {
        y.lo -= 0.5;
        y.hi += 0.5;
    }
    const double px0 = kLeft, px1 = kWidth - kRight;
    const double py0 = y0 + kPanelH - kBottom, py1 = y0 + kTop;

    s += "<g class=\"series\" data-series=\"" + std::string(name) + "\">\n";
    s += "<text x=\"" + f2(px0) + "\" y=\"" + f2(y0 + 18.0) + "\" font-size=\"14\">" + name +
         " vs delta (log10 scale)</text>\n";
    s += "<rect x=\"" + f2(px0) + "\" y=\"" + f2(py1) + "\" width=\"" + f2(px1 - px0) + "\" height=\"" +
         f2(py0 - py1) + "\" fill=\"none\" stroke=\"#999\"/>\n";
    s += "<text x=\"" + f2(px0 - 6.0) + "\" y=\"" + f2(py1 + 4.0) + "\" font-size=\"11\" text-anchor=\"end\">1e" +
         f2(y.hi) + "</text>\n";
    s += "<text x=\"" + f2(px0 - 6.0) + "\" y=\"" + f2(py0) + "\" font-size=\"11\" text-anchor=\"end\">1e" + f2(y.lo) +
         "</text>\n";
    s += "<text x=\"" + f2(px0) + "\" y=\"" + f2(py0 + 16.0) + "\" font-size=\"11\">" + g17(x.lo) + "</text>\n";
    s += "<text x=\"" + f2(px1) + "\" y=\"" + f2(py0 + 16.0) + "\" font-size=\"11\" text-anchor=\"end\">" + g17(x.hi) +
         "</text>\n";

    std::string pts;
    for (const auto& r : rows) {
        if (!pts.empty()) pts += ' ';
        pts += f2(x.map(r.delta, px0, px1)) + "," + f2(y.map(log_value(r.*field, floor_v), py0, py1));
    }
    if (rows.size() > 1)
        s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" + pts +
             "\"/>\n";
    for (const auto& r : rows) {
        s += "<circle r=\"3\" fill=\"" + std::string(colour) + "\" cx=\"" + f2(x.map(r.delta, px0, px1)) +
             "\" cy=\"" + f2(y.map(log_value(r.*field, floor_v), py0, py1)) + "\" data-delta=\"" + g17(r.delta) +
             "\" data-value=\"" + g17(r.*field) + "\"" + (r.*field > 0.0 ? "" : " data-clamped=\"1\"") + "/>\n";
    }
    s += "</g>\n";
}

}  // namespace

std::string curve_csv(const std::vector<CurveRow>& rows) {
    std::string s = "delta,moment,prediction,ratio,nsw_F,step_halving_delta\n";
    for (const auto& r : rows)
        s += g17(r.delta) + "," + g17(r.moment) + "," + g17(r.prediction) + "," + g17(r.ratio) + "," + g17(r.nsw) +
             "," + g17(r.step_halving_delta) + "\n";
    return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ResourceError("cannot open " + path.string() + " for writing");
    os << text;
    if (!os) throw ResourceError("write failed for " + path.string());
}

std::string plot_svg(const std::vector<CurveRow>& rows) {
    if (rows.empty()) throw DomainError("cannot plot an empty curve table");
    const double H = 2.0 * kPanelH;
    std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f2(kWidth) + "\" height=\"" + f2(H) +
         "\" viewBox=\"0 0 " + f2(kWidth) + " " + f2(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    panel(s, rows, &CurveRow::ratio, "ratio", "#1f77b4", 0.0);
    panel(s, rows, &CurveRow::moment, "moment", "#d62728", kPanelH);
    s += "</svg>\n";
    return s;
}

void emit_plot(const std::vector<CurveRow>& rows, const std::filesystem::path& path) {
    write_text(path, plot_svg(rows));
}

}  // namespace zetacorr
