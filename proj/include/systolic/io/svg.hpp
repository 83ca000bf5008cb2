#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "systolic/profile/profile.hpp"
#include "systolic/rotorus/orbits.hpp"
#include "systolic/rotorus/rot_form.hpp"

namespace systolic::io {

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Series {
    std::vector<PlotPoint> points;
    bool dots = false;  // scatter instead of a polyline
    std::string colour = "#1f4e9a";
};

struct Label {
    PlotPoint at;
    std::string text;
};

/// A fixed-size static plot. Coordinates print with two decimals so the output is byte-stable.
struct Plot {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    std::vector<Label> labels;
    std::vector<double> vertical_rules;
};

namespace detail {

inline std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace detail

inline std::string render_svg(const Plot& plot) {
    constexpr double width = 640, height = 420, left = 70, right = 20, top = 40, bottom = 50;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    const auto widen = [&](PlotPoint p) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
        x0 = std::min(x0, p.x), x1 = std::max(x1, p.x), y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
    };
    for (const auto& s : plot.series) for (auto p : s.points) widen(p);
    for (const auto& l : plot.labels) widen(l.at);
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
    if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad, y1 += pad;
    const auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
    const auto sy = [&](double y) { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); };

    using detail::px;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" + px(height) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + px(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           detail::escape(plot.title) + "</text>\n";
    out += "<rect x=\"" + px(left) + "\" y=\"" + px(top) + "\" width=\"" + px(width - left - right) + "\" height=\"" +
           px(height - top - bottom) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
        out += "<text x=\"" + px(sx(xv)) + "\" y=\"" + px(height - bottom + 16) + "\" text-anchor=\"middle\">" +
               detail::tick(xv) + "</text>\n";
        out += "<text x=\"" + px(left - 6) + "\" y=\"" + px(sy(yv) + 4) + "\" text-anchor=\"end\">" + detail::tick(yv) +
               "</text>\n";
    }
    out += "<text x=\"" + px(width / 2) + "\" y=\"" + px(height - 12) + "\" text-anchor=\"middle\">" +
           detail::escape(plot.x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + px(height / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           px(height / 2) + ")\">" + detail::escape(plot.y_label) + "</text>\n";
    for (double x : plot.vertical_rules) {
        if (!(x >= x0 && x <= x1)) continue;
        out += "<line x1=\"" + px(sx(x)) + "\" y1=\"" + px(top) + "\" x2=\"" + px(sx(x)) + "\" y2=\"" +
               px(height - bottom) + "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    for (const auto& s : plot.series) {
        if (s.dots) {
            for (auto p : s.points)
                if (std::isfinite(p.x) && std::isfinite(p.y))
                    out += "<circle cx=\"" + px(sx(p.x)) + "\" cy=\"" + px(sy(p.y)) + "\" r=\"3\" fill=\"" + s.colour +
                           "\"/>\n";
            continue;
        }
        std::string pts;
        for (auto p : s.points) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
            if (!pts.empty()) pts += ' ';
            pts += px(sx(p.x)) + ',' + px(sy(p.y));
        }
        out += "<polyline fill=\"none\" stroke=\"" + s.colour + "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }
    for (const auto& l : plot.labels) {
        out += "<circle cx=\"" + px(sx(l.at.x)) + "\" cy=\"" + px(sy(l.at.y)) + "\" r=\"3\" fill=\"#b22\"/>\n";
        out += "<text x=\"" + px(sx(l.at.x) + 6) + "\" y=\"" + px(sy(l.at.y) - 6) + "\">" + detail::escape(l.text) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

/// The curve r -> (f, g), marked where the inner arc, the outer arc and the boundary begin.
inline Plot gamma_plot(const profile::ProfileCurve& c, std::size_t grid = 400) {
    Plot p{"profile curve", "f", "g", {}, {}, {}};
    Series s;
    for (double r : profile::profile_grid(c, grid)) s.points.push_back({c.f(r), c.g(r)});
    p.series.push_back(std::move(s));
    const auto& q = c.params;
    p.labels.push_back({{c.f(q.r0), c.g(q.r0)}, "r0"});
    p.labels.push_back({{c.f(q.r1), c.g(q.r1)}, "r1"});
    p.labels.push_back({{c.f(q.rho), c.g(q.rho)}, "rho"});
    return p;
}

inline Plot tau_plot(const profile::TauProfile& tau, std::size_t grid = 400) {
    Plot p{"return time on the page", "r", "tau", {}, {}, {}};
    Series s;
    for (double r : profile::profile_grid(tau.curve(), grid)) s.points.push_back({r, tau(r)});
    p.series.push_back(std::move(s));
    const auto& q = tau.curve().params;
    p.vertical_rules = {q.r0, q.r1};
    return p;
}

inline Plot wronskian_plot(const rotorus::RotForm& form, std::size_t grid = 400) {
    Plot p{"contact density", "r", "W", {}, {}, {}};
    Series s;
    for (std::size_t i = 0; i <= grid; ++i) {
        const double r = form.radius() * static_cast<double>(i) / static_cast<double>(grid);
        s.points.push_back({r, form.wronskian(r)});
    }
    p.series.push_back(std::move(s));
    return p;
}

inline Plot orbit_plot(const rotorus::OrbitEnumeration& e) {
    Plot p{"closed orbits", "r", "period", {}, {}, {}};
    Series tori{{}, true, "#1f4e9a"};
    for (const auto& o : e.orbits) {
        if (o.kind == rotorus::OrbitKind::resonant_band) {
            p.series.push_back({{{o.r, o.period}, {o.r_end, o.period}}, false, "#2a8a3a"});
        } else {
            tori.points.push_back({o.r, o.period});
        }
    }
    p.series.push_back(std::move(tori));
    return p;
}

}  // namespace systolic::io
