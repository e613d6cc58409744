#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "liecycles/errors.hpp"
#include "liecycles/interplay.hpp"
#include "liecycles/scene.hpp"
#include "liecycles/subspaces.hpp"
#include "liecycles/svg.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_self_tests(const lie::Tolerances& tol) {
  using namespace lie;
  int failures = 0;
  auto check = [&](const char* name, bool ok, double got, double want) {
    if (ok) {
      std::cout << "ok   " << name << "\n";
    } else {
      std::cout << "FAIL " << name << ": got " << got << ", want " << want
                << "\n";
      ++failures;
    }
  };
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };

  try {
    // Round trips through the coordinate chart.
    Sphere s{Eigen::Vector2d(3, -1), 2.5, -1};
    Cycle back = decode(encode(s), tol);
    const auto* s2 = std::get_if<Sphere>(&back);
    bool ok = s2 && near(s2->radius, 2.5) && s2->orientation == -1 &&
              (s2->center - s.center).norm() <= 1e-12;
    check("sphere round trip", ok, s2 ? s2->radius : -1, 2.5);

    Plane pl{Eigen::Vector2d(0, 1), 1};
    back = decode(encode(pl), tol);
    const auto* pl2 = std::get_if<Plane>(&back);
    ok = pl2 && near(pl2->support, 1) && (pl2->normal - pl.normal).norm() <= 1e-12;
    check("plane round trip", ok, pl2 ? pl2->support : -1, 1);

    // Unit circles with centers one apart meet at 2*pi/3.
    PairInvariant inv = pair_invariant(encode(Sphere{Eigen::Vector2d(0, 0), 1, 1}),
                                       encode(Sphere{Eigen::Vector2d(1, 0), 1, 1}), tol);
    ok = inv.kind == Contact::Intersecting && inv.angle &&
         near(*inv.angle, 2 * std::numbers::pi / 3);
    check("intersection angle", ok, inv.angle ? *inv.angle : -1,
          2 * std::numbers::pi / 3);

    // Unit circles four apart: common tangent length 2*sqrt(3)... the
    // oriented tangent length for equal orientations is sqrt(d^2 - (r1-r2)^2).
    inv = pair_invariant(encode(Sphere{Eigen::Vector2d(0, 0), 1, 1}),
                         encode(Sphere{Eigen::Vector2d(4, 0), 1, 1}), tol);
    ok = inv.kind == Contact::CommonTangent && inv.tangent_distance &&
         near(*inv.tangent_distance, 4);
    check("tangent length", ok, inv.tangent_distance ? *inv.tangent_distance : -1, 4);

    // Three mutually tangent circles of radius 2: the gap circle and the
    // enclosing circle, radii 4/sqrt(3) -/+ 2, both centered at the centroid.
    const double side = 4, h = side * std::sqrt(3.0) / 2;
    std::vector<Vec> inputs = {
        encode(Sphere{Eigen::Vector2d(0, 0), 2, 1}),
        encode(Sphere{Eigen::Vector2d(side, 0), 2, 1}),
        encode(Sphere{Eigen::Vector2d(side / 2, h), 2, 1})};
    std::vector<Vec> sols = apollonius(inputs, tol);
    ok = sols.size() == 2;
    double r_small = 0, r_big = 0;
    if (ok) {
      for (const Vec& z : sols) {
        Cycle c = decode(z, tol);
        if (const auto* sp = std::get_if<Sphere>(&c)) {
          const double r = sp->radius;
          if (r_small == 0 || r < r_small) r_small = r;
          if (r > r_big) r_big = r;
        }
      }
      ok = near(r_small, 4 / std::sqrt(3.0) - 2) && near(r_big, 4 / std::sqrt(3.0) + 2);
    }
    check("triple tangency count", sols.size() == 2,
          static_cast<double>(sols.size()), 2);
    check("triple tangency radii", ok, r_small, 4 / std::sqrt(3.0) - 2);

    // A hyperbolic pencil: the squared subcycle radius times |delta| is 1.
    std::vector<Cycle> pencil = {Sphere{Eigen::Vector3d(0, 0, 1), 1.5, 1},
                                 Sphere{Eigen::Vector3d(0, 0, -1), 1.5, 1}};
    Family f = make_family(pencil, Special::r(), tol);
    SubcycleGeometry geo = subcycle_geometry(f, tol);
    ok = geo.radius && near(*geo.radius * *geo.radius * std::abs(geo.delta_w), 1);
    check("subcycle radius identity", ok,
          geo.radius ? *geo.radius * *geo.radius * std::abs(geo.delta_w) : -1, 1);

    // Cone half angle against its discriminant.
    std::vector<Cycle> cone_members = {Sphere{Eigen::Vector2d(0, 0), 1, 1},
                                       Sphere{Eigen::Vector2d(3, 0), 2, 1}};
    Family g = make_family(cone_members, Special::w(), tol);
    ConeGeometry cg = cone_geometry(g, tol);
    const double c = std::cos(cg.half_angle);
    ok = near(cg.delta_r + 1 / (c * c), 0);
    check("cone angle identity", ok, cg.delta_r, -1 / (c * c));

    // Spectrum identity for a linked pair of pencils.  The second subcycle
    // threads the first exactly once, so delta is negative and the identity
    // is checked away from zero.
    std::vector<Cycle> px = {Sphere{Eigen::Vector3d(0, 0, 1), 1.5, 1},
                             Sphere{Eigen::Vector3d(0, 0, -1), 1.5, 1}};
    std::vector<Cycle> py = {Sphere{Eigen::Vector3d(1, 1, 0), 1.5, 1},
                             Sphere{Eigen::Vector3d(1, -1, 0), 1.5, 1}};
    Family fx = make_family(px, Special::r(), tol);
    Family fy = make_family(py, Special::r(), tol);
    const double delta = two_family_discriminant(fx, fy, tol);
    EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
    double prod = 1;
    for (double lam : eig.eigenvalues) prod *= 1 - lam;
    check("pencil link sign", delta < 0, delta, -1);
    check("pencil spectrum identity", near(delta, -prod), delta, -prod);
  } catch (const lie::Error& e) {
    std::cout << "FAIL (" << e.kind() << ") " << e.what() << "\n";
    ++failures;
  }

  std::cout << (failures == 0 ? "all checks passed" : "checks FAILED") << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"oriented-cycle geometry toolkit"};
  app.require_subcommand(1);

  lie::Tolerances tol;
  app.add_option("--tol-class", tol.classify,
                 "classification threshold for normalized determinants");
  app.add_option("--tol-rank", tol.rank, "relative rank cutoff");

  std::string scene_path, out_path, svg_path;

  CLI::App* run = app.add_subcommand("run", "evaluate a scene's queries");
  run->add_option("scene", scene_path, "scene JSON file")->required();
  run->add_option("--out", out_path, "report destination (default stdout)");

  CLI::App* render = app.add_subcommand("render", "draw a plane scene as SVG");
  render->add_option("scene", scene_path, "scene JSON file")->required();
  render->add_option("--svg", svg_path, "SVG destination (default stdout)");

  CLI::App* check = app.add_subcommand("check", "run builtin invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      lie::Scene scene = lie::parse_scene(slurp(scene_path));
      lie::Report report = lie::run_queries(scene, tol);
      const std::string text = report.dump(2) + "\n";
      if (out_path.empty())
        std::cout << text;
      else
        spill(out_path, text);
      return 0;
    }
    if (render->parsed()) {
      lie::Scene scene = lie::parse_scene(slurp(scene_path));
      lie::Report report = lie::run_queries(scene, tol);
      const std::string text = lie::render_svg(scene, report, tol);
      if (svg_path.empty())
        std::cout << text;
      else
        spill(svg_path, text);
      return 0;
    }
    if (check->parsed()) return run_self_tests(tol);
  } catch (const lie::Error& e) {
    std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
