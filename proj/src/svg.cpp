#include "tvd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace tvd {

void write_svg_chart(const std::string& path, const std::string& title,
                     std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.empty())
        throw std::invalid_argument("write_svg_chart: need equal, non-empty series");

    const double w = 720.0, h = 420.0, ml = 60.0, mr = 20.0, mt = 40.0, mb = 40.0;
    double xmin = xs[0], xmax = xs[0], ymin = ys[0], ymax = ys[0];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xmin = std::min(xmin, xs[i]);
        xmax = std::max(xmax, xs[i]);
        ymin = std::min(ymin, ys[i]);
        ymax = std::max(ymax, ys[i]);
    }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    f << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" << title << "</text>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
      << h - mb << "\" stroke=\"black\"/>\n";
    f << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
      << "\" stroke=\"black\"/>\n";
    f << "<text x=\"" << ml << "\" y=\"" << h - mb + 18 << "\" font-family=\"sans-serif\" "
         "font-size=\"11\">" << xmin << "</text>\n";
    f << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << xmax
      << "</text>\n";
    f << "<text x=\"" << ml - 6 << "\" y=\"" << h - mb
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymin
      << "</text>\n";
    f << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymax
      << "</text>\n";
    f << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    // Thin dense traces a little to keep files small.
    const std::size_t stride = std::max<std::size_t>(1, xs.size() / 4000);
    for (std::size_t i = 0; i < xs.size(); i += stride) {
        f << px(xs[i]) << ',' << py(ys[i]) << ' ';
    }
    f << "\"/>\n</svg>\n";
}

}  // namespace tvd
