#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "liecycles/errors.hpp"
#include "liecycles/families.hpp"
#include "liecycles/oracle.hpp"
#include "liecycles/subspaces.hpp"

using namespace lie;

namespace {

Family pencil3(std::mt19937& rng) {
  // Two spheres through a random circle in R^3: always a hyperbolic
  // Steiner family.
  std::uniform_real_distribution<double> rad(0.5, 2.0);
  std::uniform_real_distribution<double> off(0.3, 1.5);
  for (;;) {
    Eigen::Vector3d center = th::rand_vec(rng, 3, -2, 2);
    Eigen::Vector3d axis = th::rand_vec(rng, 3, -1, 1);
    if (axis.norm() < 0.3) continue;
    axis.normalize();
    const double rho = rad(rng), t1 = off(rng), t2 = -off(rng);
    std::vector<Cycle> spanning = {
        Sphere{center + t1 * axis, std::hypot(rho, t1), 1},
        Sphere{center + t2 * axis, std::hypot(rho, t2), 1}};
    try {
      Family f = make_family(spanning, Special::r());
      if (f.cls == FamilyClass::Hyperbolic) return f;
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("family classification") {
  // Intersecting circles with r span a hyperbolic pencil.
  std::vector<Cycle> meet = {Sphere{Eigen::Vector2d(0, 0), 1, 1},
                             Sphere{Eigen::Vector2d(1, 0), 1, 1}};
  CHECK(make_family(meet, Special::r()).cls == FamilyClass::Hyperbolic);

  // Internally tangent circles: the parabolic boundary.
  std::vector<Cycle> tangent = {Sphere{Eigen::Vector2d(0, 1), 1, 1},
                                Sphere{Eigen::Vector2d(0, 2), 2, 1}};
  Family par = make_family(tangent, Special::r());
  CHECK(par.cls == FamilyClass::Parabolic);
  CHECK_THROWS_AS(subcycle_geometry(par), InvalidInput);
  CHECK_THROWS_AS(s_discriminant(par, vec_w(2)), InvalidInput);

  // Disjoint circles: elliptic (no common cycle).
  std::vector<Cycle> apart = {Sphere{Eigen::Vector2d(0, 0), 1, 1},
                              Sphere{Eigen::Vector2d(4, 0), 1, 1}};
  CHECK(make_family(apart, Special::r()).cls == FamilyClass::Elliptic);
}

TEST_CASE("make_family validates input") {
  std::vector<Cycle> one = {Sphere{Eigen::Vector2d(0, 0), 1, 1}};
  CHECK_THROWS_AS(make_family(one, Special::r()), InvalidInput);

  // Projectively repeated spanning cycle: rank deficient.
  Mat m(5, 2);
  m.col(0) = encode(Sphere{Eigen::Vector2d(0, 0), 1, 1});
  m.col(1) = 2 * m.col(0);
  CHECK_THROWS_AS(make_family(m, Special::r()), DependentSpanningSet);

  Mat off = m;
  off(0, 1) += 1;  // not on the quadric
  CHECK_THROWS_AS(make_family(off, Special::r()), NotOnQuadric);
}

TEST_CASE("s-discriminant scale behavior") {
  std::mt19937 rng(41);
  for (int it = 0; it < 50; ++it) {
    Family f = pencil3(rng);
    const Vec w = vec_w(3);
    const double base = s_discriminant(f, w);

    // Rescaling spanning vectors or S leaves delta unchanged.
    std::uniform_real_distribution<double> sc(0.2, 4.0);
    Mat scaled = f.spanning;
    scaled.col(0) *= sc(rng);
    scaled.col(1) *= -sc(rng);
    Family g = make_family(scaled, Special::r());
    CHECK(th::rel_gap(s_discriminant(g, w), base) <= 1e-9);

    // delta scales quadratically in the scale of S'.
    const double lam = sc(rng);
    CHECK(th::rel_gap(s_discriminant(f, lam * w), lam * lam * base) <= 1e-9);
  }
}

TEST_CASE("frame orthogonality and the discriminant identity") {
  std::mt19937 rng(42);
  for (int it = 0; it < 500; ++it) {
    Family f = pencil3(rng);
    const Vec w = vec_w(3);
    FamilyFrame frame = family_frame(f, w);
    const double scale = 1 + frame.center.norm();
    CHECK(std::abs(product(frame.center, f.special)) <= 1e-9 * scale);
    for (Eigen::Index j = 0; j < frame.l_basis.cols(); ++j) {
      CHECK(std::abs(product(frame.l_basis.col(j), w)) <=
            1e-9 * (1 + frame.l_basis.col(j).norm()));
      CHECK(std::abs(product(frame.l_basis.col(j), frame.center)) <=
            1e-9 * scale);
    }
    CHECK(th::rel_gap(s_discriminant(f, w),
                      product(w, w) - product(frame.center, frame.center)) <=
          1e-9);
  }
}

TEST_CASE("subcycle matches the two-sphere intersection oracle") {
  std::mt19937 rng(43);
  for (int it = 0; it < 100; ++it) {
    Family f = pencil3(rng);
    SubcycleGeometry geo = subcycle_geometry(f);
    REQUIRE(geo.radius);
    REQUIRE(geo.center);

    // Euclidean oracle straight from the spanning spheres.
    Cycle c0 = decode(f.spanning.col(0)), c1 = decode(f.spanning.col(1));
    const auto& s0 = std::get<Sphere>(c0);
    const auto& s1 = std::get<Sphere>(c1);
    const Eigen::VectorXd d = s1.center - s0.center;
    const double dist = d.norm();
    const double a = (s0.radius * s0.radius - s1.radius * s1.radius +
                      dist * dist) /
                     (2 * dist);
    Eigen::VectorXd icenter = s0.center + (a / dist) * d;
    const double irad = std::sqrt(s0.radius * s0.radius - a * a);
    CHECK((*geo.center - icenter).norm() <= 1e-9 * (1 + icenter.norm()));
    CHECK(th::near(*geo.radius, irad, 1e-9 * (1 + irad)));
    CHECK(th::near(*geo.radius * *geo.radius * std::abs(geo.delta_w), 1.0, 1e-9));

    // Carrier planes contain the intersection circle's center.
    for (const Plane& pl : geo.carrier)
      CHECK(th::near(pl.normal.dot(icenter), pl.support, 1e-7 * (1 + icenter.norm())));
  }
}

TEST_CASE("all-plane Steiner families") {
  std::vector<Cycle> planes = {Plane{Eigen::Vector2d(1, 0), 0},
                               Plane{Eigen::Vector2d(0, 1), 0}};
  Family f = make_family(planes, Special::r());
  REQUIRE(f.cls == FamilyClass::Hyperbolic);
  SubcycleGeometry geo = subcycle_geometry(f);
  CHECK(geo.all_planes);
  CHECK(std::abs(geo.delta_w) <= 1e-9);
  CHECK(geo.min_spheres.empty());
}

TEST_CASE("cone matches the homothety oracle") {
  std::mt19937 rng(44);
  int done = 0;
  while (done < 100) {
    Eigen::Vector2d c0 = th::rand_vec(rng, 2, -3, 3);
    Eigen::Vector2d c1 = th::rand_vec(rng, 2, -3, 3);
    std::uniform_real_distribution<double> rad(0.3, 2.0);
    const double r0 = rad(rng), r1 = rad(rng);
    const double dist = (c1 - c0).norm();
    // Need distinct radii, a genuine external tangent pair, and a margin.
    if (std::abs(r1 - r0) < 0.2 || dist < r0 + r1 + 0.3) continue;

    std::vector<Cycle> spanning = {Sphere{c0, r0, 1}, Sphere{c1, r1, 1}};
    Family f = make_family(spanning, Special::w());
    if (f.cls != FamilyClass::Hyperbolic) continue;
    ConeGeometry geo = cone_geometry(f);

    // Homothety center of the two circles and the tangent-line half angle.
    Eigen::Vector2d vertex = (r1 * c0 - r0 * c1) / (r1 - r0);
    const double sin_half = r0 / (c0 - vertex).norm();
    REQUIRE(geo.apex_set.size() == 1);
    CHECK((geo.apex_set[0].location - vertex).norm() <= 1e-9 * (1 + vertex.norm()));
    CHECK(th::near(std::sin(geo.half_angle), sin_half, 1e-9));
    CHECK(th::near(geo.delta_r, -1 / std::pow(std::cos(geo.half_angle), 2), 1e-9));

    // Axis planes pass through the vertex, normal along the axis.
    for (const Plane& pl : geo.axis_plane)
      CHECK(th::near(pl.normal.dot(vertex), pl.support, 1e-7 * (1 + vertex.norm())));
    ++done;
  }
}

TEST_CASE("cone worked example and the cylinder limit") {
  std::vector<Cycle> taper = {Sphere{Eigen::Vector2d(0, 0), 1, 1},
                              Sphere{Eigen::Vector2d(3, 0), 2, 1}};
  ConeGeometry geo = cone_geometry(make_family(taper, Special::w()));
  CHECK(th::near(geo.delta_r, -9.0 / 8.0, 1e-9));
  CHECK(th::near(geo.half_angle, std::asin(1.0 / 3.0), 1e-9));
  REQUIRE(geo.apex_set.size() == 1);
  CHECK((geo.apex_set[0].location - Eigen::Vector2d(-3, 0)).norm() <= 1e-9);

  std::vector<Cycle> tube = {Sphere{Eigen::Vector2d(0, 0), 1, 1},
                             Sphere{Eigen::Vector2d(4, 0), 1, 1}};
  ConeGeometry cyl = cone_geometry(make_family(tube, Special::w()));
  CHECK(th::near(cyl.delta_r, -1.0, 1e-9));
  CHECK(th::near(cyl.half_angle, 0.0, 1e-9));
  CHECK(cyl.axis_plane.empty());
  CHECK(cyl.apex_set.empty());
}

TEST_CASE("sampled members lie on the quadric inside the family") {
  std::mt19937 rng(45);
  Family f = pencil3(rng);
  std::vector<Vec> members = sample_members(f, 40);
  CHECK(members.size() >= 30);
  Mat sub = f.subspace();
  for (const Vec& m : members) {
    CHECK(std::abs(product(m, m)) <= 1e-8 * m.squaredNorm());
    Vec res = m - sub * sub.fullPivHouseholderQr().solve(m);
    CHECK(res.norm() <= 1e-8 * m.norm());
  }
}

TEST_CASE("extremality of the discriminant over a pencil") {
  // For each member x, det Gram(x,r,W)/det Gram(x,r) = -1/rho(x)^2: the
  // family's delta_W is the minimum, planes push the value toward zero.
  std::mt19937 rng(46);
  Family f = pencil3(rng);
  SubcycleGeometry geo = subcycle_geometry(f);
  const Vec w = vec_w(3), r = vec_r(3);
  double lo = 1e300, hi = -1e300;
  for (const Vec& m : sample_members(f, 1000)) {
    Mat xr = columns({m, r});
    const double val = gram_det(append_column(xr, w)) / gram_det(xr);
    lo = std::min(lo, val);
    hi = std::max(hi, val);
  }
  CHECK(lo >= geo.delta_w - 1e-9);
  CHECK(hi <= 1e-9);
  CHECK(lo <= geo.delta_w + 0.05 * std::abs(geo.delta_w));

  // The projections of C are the minimal-radius members.
  double min_sampled = 1e300;
  for (const Vec& m : sample_members(f, 1000)) {
    Cycle c = decode(m);
    if (const auto* s = std::get_if<Sphere>(&c))
      min_sampled = std::min(min_sampled, s->radius);
  }
  REQUIRE(geo.radius);
  CHECK(*geo.radius <= min_sampled + 1e-9);
}

TEST_CASE("simplex invariants: worked examples") {
  Vec a = encode(Sphere{Eigen::Vector2d(0, 0), 1, 1});
  Vec b = encode(Sphere{Eigen::Vector2d(4, 0), 1, 1});
  CHECK(th::near(simplex_invariants({a, b}, SimplexMode::Contact), -16, 1e-9));
  CHECK(th::near(simplex_invariants({a, b}, SimplexMode::Centers), 16, 1e-9));

  // Orthogonally intersecting circles: radius 1 at origin and radius 1 at
  // distance sqrt(2) meet at right angles and share point(s).
  Vec c = encode(Sphere{Eigen::Vector2d(std::sqrt(2.0), 0), 1, 1});
  CHECK(th::near(simplex_invariants({a, c}, SimplexMode::PolarSine), -1, 1e-9));

  // Planes have no w-chart representative.
  Vec pl = encode(Plane{Eigen::Vector2d(1, 0), 0});
  CHECK_THROWS_AS(simplex_invariants({a, pl}, SimplexMode::Contact), OutsideChart);
}

TEST_CASE("torus families carry their own special vector") {
  const double rho = 1.5;
  std::vector<Cycle> ring = {Sphere{Eigen::Vector3d(2, 0, 0), 0.5, 1},
                             Sphere{Eigen::Vector3d(-2, 0, 0), 0.5, 1}};
  Family f = make_family(ring, Special::torus(rho));
  CHECK(f.special_kind == SpecialKind::Torus);
  CHECK((f.special - (rho * vec_w(3) + vec_r(3))).norm() <= 1e-12);
  CHECK(th::near(product(f.special, f.special), -1.0, 1e-12));

  // W is orthogonal to rho*W + R, so the W-discriminant still makes sense,
  // and members keep living on the quadric.
  if (f.cls == FamilyClass::Hyperbolic) {
    const double d = s_discriminant(f, vec_w(3));
    CHECK(std::isfinite(d));
    for (const Vec& m : sample_members(f, 20))
      CHECK(std::abs(product(m, m)) <= 1e-8 * m.squaredNorm());
  }
}

TEST_CASE("contact mode agrees with the Cayley-Menger determinant") {
  std::mt19937 rng(47);
  int done = 0;
  while (done < 100) {
    // Three same-orientation circles pairwise admitting tangent lengths.
    std::vector<Sphere> cs;
    for (int i = 0; i < 3; ++i) cs.push_back(th::rand_sphere(rng, 2));
    for (auto& s : cs) s.orientation = 1;
    bool ok = true;
    Eigen::Matrix3d t2 = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3 && ok; ++i)
      for (int j = i + 1; j < 3 && ok; ++j) {
        try {
          const double t = euclid::tangent_length_oracle(
              {cs[i].center, cs[i].radius}, {cs[j].center, cs[j].radius});
          if (t < 0.3) ok = false;
          t2(i, j) = t2(j, i) = t * t;
        } catch (const euclid::NoCommonTangent&) {
          ok = false;
        }
      }
    if (!ok) continue;

    // Cayley-Menger for a triangle comes out as -16 * area^2, and contact
    // mode is -4 * area^2, so the two determinants differ by a factor 4.
    Eigen::Matrix4d cm;
    cm << 0, 1, 1, 1,
          1, 0, t2(0, 1), t2(0, 2),
          1, t2(0, 1), 0, t2(1, 2),
          1, t2(0, 2), t2(1, 2), 0;
    const double contact = simplex_invariants(
        {encode(cs[0]), encode(cs[1]), encode(cs[2])}, SimplexMode::Contact);
    CHECK(th::rel_gap(contact, cm.determinant() / 4.0) <= 1e-8);
    ++done;
  }
}
