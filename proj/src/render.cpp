#include "sobext/render.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "sobext/serialize.hpp"

namespace sobext {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string render_svg(const Pipeline& pipeline, const RenderOptions& options) {
  if (!(options.radius > 0.0) || options.pixels < 16) throw ValidationError("bad render window");
  const CzDecomposition& cz = pipeline.cz;
  const GroupTable& g = pipeline.groups;
  const double r = options.radius;
  const double px = options.pixels / (2.0 * r);
  // y grows upward in the normalized frame and downward in SVG.
  auto sx = [&](double x) { return (x + r) * px; };
  auto sy = [&](double y) { return (r - y) * px; };

  std::set<SquareId> tower, gang;
  for (const Group& group : g.groups()) {
    tower.insert(group.tower.begin(), group.tower.end());
    for (const auto& members : group.gangs) gang.insert(members.begin(), members.end());
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.pixels << "\" height=\"" << options.pixels
      << "\" viewBox=\"0 0 " << options.pixels << ' ' << options.pixels << "\">\n";
  out << "<style>.easy{fill:#cfe8c8}.hard{fill:#f3c9b4}.easy.rel{fill:#8fc77f}.hard.rel{fill:#e5906a}"
         "rect{stroke:#555;stroke-width:0.3}.tower{stroke:#1f3fbf;stroke-width:2}"
         ".gang{stroke-dasharray:4 2;stroke:#7a2a9a;stroke-width:1.2}.site{fill:#000}</style>\n";
  out << "<g id=\"squares\">\n";
  for (SquareId id = 0; id < static_cast<SquareId>(cz.size()); ++id) {
    const CzSquare& c = cz.square(id);
    const DyadicInterval xi = c.square.x_interval();
    const DyadicInterval yi = c.square.y_interval();
    const double x0 = xi.left_d(), x1 = xi.right_d(), y0 = yi.left_d(), y1 = yi.right_d();
    if (x1 <= -r || x0 >= r || y1 <= -r || y0 >= r) continue;
    std::string cls = g.square_easy(cz, id) ? "easy" : "hard";
    if (c.relevant) cls += " rel";
    if (options.gangs && gang.count(id)) cls += " gang";
    if (options.towers && tower.count(id)) cls += " tower";
    out << "<rect id=\"" << square_key(id) << "\" class=\"" << cls << "\" x=\"" << num(sx(x0)) << "\" y=\""
        << num(sy(y1)) << "\" width=\"" << num((x1 - x0) * px) << "\" height=\"" << num((y1 - y0) * px)
        << "\"/>\n";
  }
  out << "</g>\n";
  if (options.sites) {
    out << "<g id=\"sites\">\n";
    for (double x : pipeline.sites.xs_d()) {
      if (x <= -r || x >= r) continue;
      out << "<circle class=\"site\" cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(0.0)) << "\" r=\"2\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sobext
