#ifndef TVD_SVG_HPP
#define TVD_SVG_HPP

#include <span>
#include <string>

namespace tvd {

// Minimal self-contained SVG line chart (single polyline, linear axes).
void write_svg_chart(const std::string& path, const std::string& title,
                     std::span<const double> xs, std::span<const double> ys);

}  // namespace tvd

#endif
