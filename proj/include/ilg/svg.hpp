#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "ilg/domain.hpp"
#include "ilg/flow.hpp"

namespace ilg {

/** Standalone SVG of a characteristic fan: axes matching the domain, one 1px polyline
 *  per curve.  Fixed styling and number formatting, so identical inputs produce
 *  byte-identical files.  Returns the number of bytes written. */
inline std::size_t emit_fan_svg(const std::vector<Characteristic>& curves, const Domain& dom,
                                const std::string& path) {
    const double W = 640, H = 480, m = 40;  // canvas and margin
    auto X = [&](double s) { return m + (s - dom.z_lo) / dom.width() * (W - 2 * m); };
    auto Y = [&](double t) { return H - m - (t - dom.t_lo) / dom.height() * (H - 2 * m); };
    char buf[128];
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %g %g\">\n", W, H);
    svg += buf;
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    auto line = [&](double x1, double y1, double x2, double y2) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.6g\" y1=\"%.6g\" x2=\"%.6g\" y2=\"%.6g\" "
                      "stroke=\"black\" stroke-width=\"1\"/>\n",
                      x1, y1, x2, y2);
        svg += buf;
    };
    line(X(dom.z_lo), Y(dom.t_lo), X(dom.z_hi), Y(dom.t_lo));
    line(X(dom.z_lo), Y(dom.t_lo), X(dom.z_lo), Y(dom.t_hi));
    if (dom.t_lo < 0 && 0 < dom.t_hi) line(X(dom.z_lo), Y(0), X(dom.z_hi), Y(0));
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.6g\" y=\"%.6g\" font-size=\"12\">z</text>\n",
                  X(dom.z_hi) + 6, Y(dom.t_lo) + 4);
    svg += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.6g\" y=\"%.6g\" font-size=\"12\">t</text>\n",
                  X(dom.z_lo) - 14, Y(dom.t_hi) - 6);
    svg += buf;
    for (const auto& c : curves) {
        svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1\" points=\"";
        for (std::size_t i = 0; i < c.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6g,%.6g", i ? " " : "", X(c.s_at(i)),
                          Y(c.gamma[i]));
            svg += buf;
        }
        svg += "\"/>\n";
    }
    svg += "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write SVG: " + path);
    out << svg;
    return svg.size();
}

}  // namespace ilg
