#include "svg.hpp"

#include <cstdio>
#include <sstream>

namespace pamcli {

std::string render_heat_map(const HeatMap& m) {
  const double left = 70, top = 40, size = 400, legend_w = 170;
  const double cw = size / m.nx, ch = size / m.ny;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << left + size + legend_w << "\" height=\""
     << top + size + 60 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<text x=\"" << left << "\" y=\"24\" font-size=\"14\">" << m.title << "</text>\n";
  char buf[256];
  for (int j = 0; j < m.ny; ++j) {
    for (int i = 0; i < m.nx; ++i) {
      const int c = m.cells[static_cast<size_t>(j * m.nx + i)];
      // y grows upward.
      std::snprintf(buf, sizeof buf, "<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n",
                    left + i * cw, top + size - (j + 1) * ch, cw + 0.01, ch + 0.01,
                    m.colors[static_cast<size_t>(c)].c_str());
      os << buf;
    }
  }
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << size << "\" height=\"" << size
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double fx = m.x_min + (m.x_max - m.x_min) * k / 4.0;
    const double fy = m.y_min + (m.y_max - m.y_min) * k / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.3g</text>\n",
                  left + size * k / 4.0, top + size + 16, fx);
    os << buf;
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.3g</text>\n", left - 6,
                  top + size - size * k / 4.0 + 4, fy);
    os << buf;
  }
  os << "<text x=\"" << left + size / 2 << "\" y=\"" << top + size + 40 << "\" text-anchor=\"middle\">"
     << m.x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << top + size / 2 << "\" transform=\"rotate(-90 16 " << top + size / 2
     << ")\" text-anchor=\"middle\">" << m.y_label << "</text>\n";
  for (size_t k = 0; k < m.legend.size(); ++k) {
    const double y = top + 10 + 22.0 * static_cast<double>(k);
    os << "<rect x=\"" << left + size + 16 << "\" y=\"" << y << "\" width=\"14\" height=\"14\" fill=\""
       << m.colors[k] << "\"/>\n";
    os << "<text x=\"" << left + size + 36 << "\" y=\"" << y + 11 << "\">" << m.legend[k] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace pamcli
