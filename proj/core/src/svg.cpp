#include "liecycles/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <variant>

#include "liecycles/errors.hpp"

namespace lie {

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) v = 0;
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

enum class Style { SceneCycle, FamilySample, Derived };

struct Drawable {
  Cycle cycle;
  Style style;
};

struct Bounds {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  bool any = false;

  void point(double x, double y) {
    if (!any) {
      min_x = max_x = x;
      min_y = max_y = y;
      any = true;
      return;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }

  void cycle(const Cycle& c) {
    if (const auto* s = std::get_if<Sphere>(&c)) {
      point(s->center[0] - s->radius, s->center[1] - s->radius);
      point(s->center[0] + s->radius, s->center[1] + s->radius);
    } else if (const auto* p = std::get_if<Point>(&c)) {
      point(p->location[0], p->location[1]);
    } else if (const auto* pl = std::get_if<Plane>(&c)) {
      // Only the foot of the line contributes; the segment itself is
      // stretched to the final frame when emitted.
      point(pl->support * pl->normal[0], pl->support * pl->normal[1]);
    }
  }
};

struct Palette {
  const char* stroke;
  const char* negative_stroke;
  double width_scale;
  const char* opacity;
};

constexpr Palette kPalettes[] = {
    {"#2563eb", "#dc2626", 1.0, "1"},      // scene cycles
    {"#9ca3af", "#9ca3af", 0.6, "0.75"},   // family samples
    {"#d97706", "#d97706", 0.8, "0.9"},    // derived geometry
};

class Emitter {
 public:
  Emitter(double extent, std::ostringstream& out)
      : extent_(extent), out_(out) {}

  void draw(const Cycle& c, Style style) {
    const Palette& pal = kPalettes[static_cast<int>(style)];
    const double sw = 0.004 * extent_ * pal.width_scale;
    if (const auto* s = std::get_if<Sphere>(&c)) {
      out_ << "    <circle cx=\"" << num(s->center[0]) << "\" cy=\""
           << num(s->center[1]) << "\" r=\"" << num(s->radius)
           << "\" stroke=\""
           << (s->orientation >= 0 ? pal.stroke : pal.negative_stroke)
           << "\" stroke-width=\"" << num(sw) << "\" opacity=\""
           << pal.opacity << "\"/>\n";
    } else if (const auto* p = std::get_if<Point>(&c)) {
      out_ << "    <circle cx=\"" << num(p->location[0]) << "\" cy=\""
           << num(p->location[1]) << "\" r=\"" << num(0.008 * extent_)
           << "\" fill=\"" << pal.stroke << "\" stroke=\"none\" opacity=\""
           << pal.opacity << "\"/>\n";
    } else if (const auto* pl = std::get_if<Plane>(&c)) {
      const double fx = pl->support * pl->normal[0];
      const double fy = pl->support * pl->normal[1];
      const double dx = -pl->normal[1], dy = pl->normal[0];
      const double len = 2 * extent_;
      out_ << "    <line x1=\"" << num(fx - len * dx) << "\" y1=\""
           << num(fy - len * dy) << "\" x2=\"" << num(fx + len * dx)
           << "\" y2=\"" << num(fy + len * dy) << "\" stroke=\"" << pal.stroke
           << "\" stroke-width=\"" << num(sw) << "\" opacity=\""
           << pal.opacity << "\"/>\n";
      // Short tick along the normal marks the plane's orientation.
      out_ << "    <line x1=\"" << num(fx) << "\" y1=\"" << num(fy)
           << "\" x2=\"" << num(fx + 0.04 * extent_ * pl->normal[0])
           << "\" y2=\"" << num(fy + 0.04 * extent_ * pl->normal[1])
           << "\" stroke=\"" << pal.stroke << "\" stroke-width=\"" << num(sw)
           << "\" opacity=\"" << pal.opacity << "\"/>\n";
    }
  }

 private:
  double extent_;
  std::ostringstream& out_;
};

// Pulls every embedded cycle object out of a report payload, in document
// order, so derived geometry (tangency solutions, carriers, extremal pairs)
// lands in the picture without per-query special cases.
void collect_cycles(const nlohmann::ordered_json& j, std::vector<Cycle>& out) {
  if (j.is_object()) {
    if (j.contains("sphere") && j.at("sphere").is_object()) {
      const auto& s = j.at("sphere");
      if (s.contains("center") && s.at("center").is_array() &&
          s.at("center").size() == 2 && s.contains("radius")) {
        Sphere sphere;
        sphere.center.resize(2);
        sphere.center[0] = s.at("center")[0].get<double>();
        sphere.center[1] = s.at("center")[1].get<double>();
        sphere.radius = s.at("radius").get<double>();
        sphere.orientation = s.value("orientation", 1);
        if (sphere.radius > 0) out.push_back(sphere);
        return;
      }
    }
    if (j.contains("point") && j.at("point").is_object()) {
      const auto& p = j.at("point");
      if (p.contains("location") && p.at("location").is_array() &&
          p.at("location").size() == 2) {
        Point pt;
        pt.location.resize(2);
        pt.location[0] = p.at("location")[0].get<double>();
        pt.location[1] = p.at("location")[1].get<double>();
        out.push_back(pt);
        return;
      }
    }
    if (j.contains("plane") && j.at("plane").is_object()) {
      const auto& p = j.at("plane");
      if (p.contains("normal") && p.at("normal").is_array() &&
          p.at("normal").size() == 2 && p.contains("support")) {
        Plane plane;
        plane.normal.resize(2);
        plane.normal[0] = p.at("normal")[0].get<double>();
        plane.normal[1] = p.at("normal")[1].get<double>();
        plane.support = p.at("support").get<double>();
        if (plane.normal.norm() > 1e-12) out.push_back(plane);
        return;
      }
    }
    for (const auto& [key, value] : j.items()) collect_cycles(value, out);
  } else if (j.is_array()) {
    for (const auto& value : j) collect_cycles(value, out);
  }
}

}  // namespace

std::string render_svg(const Scene& scene, const Report& report,
                       const Tolerances& tol) {
  if (scene.dimension != 2)
    throw Unsupported("render_svg: only plane scenes can be drawn");

  struct Group {
    std::string id;
    std::vector<Drawable> drawables;
    std::string note;
  };
  std::vector<Group> groups;

  for (const auto& [id, cycle] : scene.cycles)
    groups.push_back({"cycle-" + id, {{cycle, Style::SceneCycle}}, {}});

  for (const auto& [id, spec] : scene.families) {
    Group g{"family-" + id, {}, {}};
    try {
      std::vector<Cycle> cycles;
      for (const std::string& ref : spec.spanning)
        cycles.push_back(*scene.find_cycle(ref));
      Family f = make_family(cycles, Special{spec.special, spec.torus_rho}, tol);
      for (const Vec& v : sample_members(f, 12, tol)) {
        Cycle member = decode(v, tol);
        if (!std::holds_alternative<ImproperW>(member))
          g.drawables.push_back({member, Style::FamilySample});
      }
    } catch (const Error& e) {
      g.note = e.kind();
    }
    groups.push_back(std::move(g));
  }

  if (report.contains("results") && report.at("results").is_array()) {
    for (const auto& entry : report.at("results")) {
      if (!entry.value("ok", false) || !entry.contains("data")) continue;
      std::vector<Cycle> derived;
      collect_cycles(entry.at("data"), derived);
      if (derived.empty()) continue;
      Group g{"query-" + std::to_string(entry.value("query_index", 0)), {}, {}};
      for (const Cycle& c : derived) g.drawables.push_back({c, Style::Derived});
      groups.push_back(std::move(g));
    }
  }

  Bounds bounds;
  for (const Group& g : groups)
    for (const Drawable& d : g.drawables) bounds.cycle(d.cycle);
  if (!bounds.any) bounds = {-1, -1, 1, 1, true};

  double extent = std::max(bounds.max_x - bounds.min_x,
                           bounds.max_y - bounds.min_y);
  if (extent <= 0) extent = 1;
  const double margin = 0.1 * extent;

  const double vx = bounds.min_x - margin;
  const double vw = (bounds.max_x - bounds.min_x) + 2 * margin;
  const double vh = (bounds.max_y - bounds.min_y) + 2 * margin;
  // The drawing group flips y so the plane's y axis points up; the viewBox
  // is expressed in the flipped coordinates.
  const double vy = -(bounds.max_y + margin);

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(vx)
      << " " << num(vy) << " " << num(vw) << " " << num(vh) << "\">\n";
  out << "  <g transform=\"matrix(1 0 0 -1 0 0)\" fill=\"none\">\n";
  Emitter emitter(extent, out);
  for (const Group& g : groups) {
    out << "  <g id=\"" << g.id << "\">\n";
    if (!g.note.empty()) out << "    <!-- " << g.note << " -->\n";
    for (const Drawable& d : g.drawables) emitter.draw(d.cycle, d.style);
    out << "  </g>\n";
  }
  out << "  </g>\n</svg>\n";
  return out.str();
}

}  // namespace lie
