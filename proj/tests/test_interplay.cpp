#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "liecycles/errors.hpp"
#include "liecycles/interplay.hpp"
#include "liecycles/oracle.hpp"
#include "liecycles/subspaces.hpp"

using namespace lie;

namespace {

// Pencil of spheres through the circle (center, normal, radius) in R^3.
Family circle_pencil(const Eigen::Vector3d& center,
                     const Eigen::Vector3d& normal, double radius) {
  auto sphere_at = [&](double t) {
    return Cycle{Sphere{center + t * normal, std::hypot(radius, t), 1}};
  };
  return make_family(std::vector<Cycle>{sphere_at(0.7), sphere_at(-1.3)}, Special::r());
}

double signed_radius(const Sphere& s) { return s.radius * s.orientation; }

}  // namespace

TEST_CASE("family-cycle discriminant: worked cylinder example") {
  Family f = make_family(std::vector<Cycle>{Sphere{Eigen::Vector2d(0, 0), 1, 1},
                          Sphere{Eigen::Vector2d(4, 0), 1, 1}},
                         Special::w());
  Vec y = encode(Sphere{Eigen::Vector2d(2, 3), 1, 1});
  const double delta = family_cycle_discriminant(f, y);
  CHECK(th::near(delta, -9.0, 1e-9));

  CriticalProjection cp = critical_projection(f, y);
  CHECK(th::near(cp.h_at_projection, delta, 1e-9));
  // The projection is a point of the family subspace, not of the quadric.
  Vec back = project(f.subspace(), cp.projection);
  CHECK((back - cp.projection).norm() <= 1e-9 * (1 + cp.projection.norm()));
  // (W|W) = 0: no second critical locus.
  CHECK(!cp.second_point);
  CHECK(!cp.second_value);

  CHECK_THROWS_AS(family_cycle_discriminant(f, f.spanning.col(0)),
                  DegenerateTriple);
}

TEST_CASE("family-cycle discriminant is the tangent-length altitude") {
  // delta(f, y) for a cone family equals -(2 area / base)^2 of the triangle
  // whose sides are the three pairwise tangent lengths, signed through the
  // Heron polynomial when the triangle degenerates.
  std::mt19937 rng(51);
  int done = 0;
  while (done < 200) {
    Sphere a = th::rand_sphere(rng, 2), b = th::rand_sphere(rng, 2),
           y = th::rand_sphere(rng, 2);
    a.orientation = b.orientation = y.orientation = 1;
    double base, t1, t2;
    try {
      base = euclid::tangent_length_oracle({a.center, a.radius},
                                           {b.center, b.radius});
      t1 = euclid::tangent_length_oracle({a.center, a.radius},
                                         {y.center, y.radius});
      t2 = euclid::tangent_length_oracle({b.center, b.radius},
                                         {y.center, y.radius});
    } catch (const euclid::NoCommonTangent&) {
      continue;
    }
    if (base < 0.5) continue;

    Family f;
    try {
      f = make_family(std::vector<Cycle>{a, b}, Special::w());
      if (f.cls != FamilyClass::Hyperbolic) continue;
    } catch (const Error&) {
      continue;
    }
    const double p = t1 * t1, q = t2 * t2, c = base * base;
    const double heron16 = 2 * (p * q + p * c + q * c) - p * p - q * q - c * c;
    const double delta = family_cycle_discriminant(f, encode(y));
    CHECK(th::rel_gap(delta, -heron16 / (4 * c)) <= 1e-8);

    CriticalProjection cp = critical_projection(f, encode(y));
    CHECK(th::rel_gap(cp.h_at_projection, delta) <= 1e-8);
    ++done;
  }
}

TEST_CASE("critical projection has a second locus for timelike specials") {
  Family f = circle_pencil({0, 0, 0}, {0, 0, 1}, 1);
  Vec y = encode(Sphere{Eigen::Vector3d(3, 1, 2), 1.5, 1});
  CriticalProjection cp = critical_projection(f, y);
  const double delta = family_cycle_discriminant(f, y);
  CHECK(th::rel_gap(cp.h_at_projection, delta) <= 1e-9);
  // (R|R) = -1, so the orthogonal locus sits at h = 1/(S|S) = -1.
  REQUIRE(cp.second_value);
  CHECK(th::near(*cp.second_value, -1.0, 1e-9));
  REQUIRE(cp.second_point);
  CHECK(std::abs(product(*cp.second_point, y)) <=
        1e-8 * product_scale(*cp.second_point, y));
}

TEST_CASE("apollonius: equilateral worked example") {
  const double side = 4, circum = 4 / std::sqrt(3.0);
  std::vector<Vec> inputs = {
      encode(Sphere{Eigen::Vector2d(0, 0), 1, 1}),
      encode(Sphere{Eigen::Vector2d(side, 0), 1, 1}),
      encode(Sphere{Eigen::Vector2d(2, 2 * std::sqrt(3.0)), 1, 1})};
  std::vector<Vec> sols = apollonius(inputs);
  REQUIRE(sols.size() == 2);

  std::vector<double> radii;
  for (const Vec& s : sols) {
    CHECK(std::abs(product(s, s)) <= 1e-9 * s.squaredNorm());
    for (const Vec& in : inputs)
      CHECK(std::abs(product(s, in)) <= 1e-8 * product_scale(s, in));
    Cycle c = decode(s);
    const auto& sp = std::get<Sphere>(c);
    radii.push_back(sp.radius);
    CHECK((sp.center - Eigen::Vector2d(2, 2 / std::sqrt(3.0))).norm() <= 1e-9);
  }
  std::sort(radii.begin(), radii.end());
  CHECK(th::near(radii[0], circum - 1, 1e-9));
  CHECK(th::near(radii[1], circum + 1, 1e-9));
}

TEST_CASE("apollonius: solution count follows the gram sign") {
  std::mt19937 rng(52);
  int checked = 0;
  while (checked < 200) {
    std::vector<Vec> inputs;
    for (int i = 0; i < 3; ++i) inputs.push_back(encode(th::rand_sphere(rng, 2)));
    double g;
    try {
      g = gram_det_normalized(columns(inputs));
    } catch (const Error&) {
      continue;
    }
    if (std::abs(g) <= 1e-4) continue;  // classification margin

    std::vector<Vec> sols = apollonius(inputs);
    CHECK(sols.size() == (g < 0 ? 2 : 0));
    for (const Vec& s : sols)
      for (const Vec& in : inputs)
        CHECK(std::abs(product(s, in)) <= 1e-7 * product_scale(s, in));
    ++checked;
  }

  // Dimension and independence validation.
  std::vector<Vec> two = {encode(th::rand_sphere(rng, 2)),
                          encode(th::rand_sphere(rng, 2))};
  CHECK_THROWS_AS(apollonius(two), InvalidInput);
  Vec x = encode(th::rand_sphere(rng, 2));
  CHECK_THROWS_AS(apollonius(std::vector<Vec>{x, 2 * x, two[0]}),
                  DependentSpanningSet);
  CHECK_THROWS_AS(apollonius({}), InvalidInput);
}

TEST_CASE("two-family discriminant: symmetry and shared members") {
  std::mt19937 rng(53);
  for (int it = 0; it < 50; ++it) {
    Eigen::Vector3d c1 = th::rand_vec(rng, 3, -2, 2);
    Eigen::Vector3d c2 = th::rand_vec(rng, 3, -2, 2);
    Eigen::Vector3d n1 = th::rand_vec(rng, 3, -1, 1);
    Eigen::Vector3d n2 = th::rand_vec(rng, 3, -1, 1);
    if (n1.norm() < 0.3 || n2.norm() < 0.3) { --it; continue; }
    Family fx = circle_pencil(c1, n1.normalized(), 1.0);
    Family fy = circle_pencil(c2, n2.normalized(), 0.8);
    double dxy, dyx;
    try {
      dxy = two_family_discriminant(fx, fy);
      dyx = two_family_discriminant(fy, fx);
    } catch (const Error&) {
      continue;  // coincident or otherwise degenerate draw
    }
    CHECK(th::rel_gap(dxy, dyx) <= 1e-9);
  }

  // Families sharing a spanning cycle have a vanishing discriminant.
  Cycle shared = Sphere{Eigen::Vector3d(0, 0, 1), std::sqrt(2.0), 1};
  Family fx = make_family(
      std::vector<Cycle>{shared, Cycle{Sphere{Eigen::Vector3d(0, 0, -1), std::sqrt(2.0), 1}}},
      Special::r());
  Family fy = make_family(
      std::vector<Cycle>{shared, Cycle{Sphere{Eigen::Vector3d(1, 0, 1), std::sqrt(2.0), 1}}},
      Special::r());
  CHECK(std::abs(two_family_discriminant(fx, fy)) <= 1e-9);
  CHECK(steiner_pair_report(fx, fy).classification == PairClass::Intersect);
}

TEST_CASE("projector eigenanalysis: spectrum identities") {
  std::mt19937 rng(54);
  int done = 0;
  while (done < 100) {
    Eigen::Vector3d c1 = th::rand_vec(rng, 3, -2, 2);
    Eigen::Vector3d c2 = th::rand_vec(rng, 3, -2, 2);
    Eigen::Vector3d n1 = th::rand_vec(rng, 3, -1, 1);
    Eigen::Vector3d n2 = th::rand_vec(rng, 3, -1, 1);
    if (n1.norm() < 0.3 || n2.norm() < 0.3) continue;
    Family fx = circle_pencil(c1, n1.normalized(), 1.2);
    Family fy = circle_pencil(c2, n2.normalized(), 0.7);

    double delta;
    EigenAnalysis eig;
    try {
      delta = two_family_discriminant(fx, fy);
      eig = projector_eigenanalysis(fx, fy);
    } catch (const Error&) {
      continue;
    }
    CHECK(!eig.degenerate);
    REQUIRE(eig.eigenvalues.size() == 2);
    CHECK(eig.eigenvalues[0] >= eig.eigenvalues[1] - 1e-12);

    double prod = 1;
    for (double l : eig.eigenvalues) prod *= 1 - l;
    CHECK(th::rel_gap(delta, -prod) <= 1e-8);

    // Matched pairs: (E|F) = sqrt(lambda) whenever both were normalizable.
    for (size_t i = 0; i < eig.eigenvalues.size(); ++i) {
      if (eig.e[i].norm() == 0 || eig.f[i].norm() == 0) continue;
      if (std::abs(product(eig.e[i], eig.e[i]) - 1) > 1e-6) continue;
      if (std::abs(product(eig.f[i], eig.f[i]) - 1) > 1e-6) continue;
      CHECK(th::near(product(eig.e[i], eig.f[i]),
                     std::sqrt(std::max(0.0, eig.eigenvalues[i])), 1e-7));
    }
    ++done;
  }
}

TEST_CASE("steiner pair: linked, unlinked, intersecting") {
  // Hopf-style link: unit circle in the z = 0 plane at the origin, unit
  // circle in the y = 0 plane through its center.
  Family fx = circle_pencil({0, 0, 0}, {0, 0, 1}, 1);
  Family fy = circle_pencil({1, 0, 0}, {0, 1, 0}, 1);
  PairReport linked = steiner_pair_report(fx, fy);
  CHECK(th::near(linked.discriminant, -0.75, 1e-9));
  CHECK(linked.classification == PairClass::Linked);
  CHECK(!linked.min_distance);
  REQUIRE(!linked.extremal_pairs.empty());

  EigenAnalysis eig = projector_eigenanalysis(fx, fy);
  for (const ExtremalPair& p : linked.extremal_pairs) {
    // Extreme meeting angles pair up with the spectrum: cos^2 a = lambda.
    const double c2 = std::pow(std::cos(p.value), 2);
    double best = 1e300;
    for (double l : eig.eigenvalues) best = std::min(best, std::abs(c2 - l));
    CHECK(best <= 1e-7);

    // And each reported sphere pair is a genuine member meeting angle.
    const auto* xs = std::get_if<Sphere>(&p.x);
    const auto* ys = std::get_if<Sphere>(&p.y);
    if (xs && ys) {
      const double angle = euclid::angle_oracle(
          {xs->center, signed_radius(*xs)}, {ys->center, signed_radius(*ys)});
      CHECK(th::near(angle, p.value, 1e-7));
    }
  }

  // The oracle agrees that these circles are linked.
  euclid::SampledCurve ca = euclid::sample_circle({0, 0, 0}, {0, 0, 1}, 1);
  euclid::SampledCurve cb = euclid::sample_circle({1, 0, 0}, {0, 1, 0}, 1);
  CHECK(std::abs(euclid::linking_number_oracle(ca, cb)) == 1);

  // Sliding the second circle out to x = 4 unlinks it, and the oracle
  // sees zero.
  Family fz = circle_pencil({4, 0, 0}, {0, 1, 0}, 1);
  PairReport apart = steiner_pair_report(fx, fz);
  CHECK(apart.discriminant > 0);
  CHECK(apart.classification == PairClass::Unlinked);
  euclid::SampledCurve cc = euclid::sample_circle({4, 0, 0}, {0, 1, 0}, 1);
  CHECK(euclid::linking_number_oracle(ca, cc) == 0);

  // Coplanar disjoint circles are unlinked too, but their pencils share
  // the common carrier plane, so the pair reports the shared cycle.
  Family fcop = circle_pencil({4, 0, 0}, {0, 0, 1}, 1);
  PairReport coplanar = steiner_pair_report(fx, fcop);
  CHECK(std::abs(coplanar.discriminant) <= 1e-9);
  CHECK(coplanar.classification == PairClass::Intersect);

  // Circles through common points classify as intersecting.
  Family fw = circle_pencil({0, 0, 0}, {0, 1, 0}, 1);
  CHECK(steiner_pair_report(fx, fw).classification == PairClass::Intersect);

  CHECK_THROWS_AS(steiner_pair_report(fx, fx), InvalidInput);
  Family cone2 = make_family(std::vector<Cycle>{Sphere{Eigen::Vector2d(0, 0), 1, 1},
                              Sphere{Eigen::Vector2d(4, 0), 1, 1}},
                             Special::w());
  CHECK_THROWS_AS(steiner_pair_report(cone2, cone2), InvalidInput);
}

TEST_CASE("cone pair: tangential distance and shared structure") {
  // Skew cylinders: unit spheres along the z axis against radius-2 spheres
  // along an x-direction line at y = 10.  The tangential distance between
  // members at heights z and x is sqrt(x^2 + z^2 + 100 - 1), minimized at
  // the single aligned pair.
  Family fa = make_family(std::vector<Cycle>{Sphere{Eigen::Vector3d(0, 0, 0), 1, 1},
                           Sphere{Eigen::Vector3d(0, 0, 4), 1, 1}},
                          Special::w());
  Family fb = make_family(std::vector<Cycle>{Sphere{Eigen::Vector3d(0, 10, 0), 2, 1},
                           Sphere{Eigen::Vector3d(3, 10, 0), 2, 1}},
                          Special::w());
  PairReport far = cone_pair_report(fa, fb);
  CHECK(far.classification == PairClass::DistanceExists);
  REQUIRE(far.min_distance);
  CHECK(th::near(*far.min_distance, std::sqrt(99.0), 1e-8));
  REQUIRE(!far.extremal_pairs.empty());
  bool attained = false;
  for (const auto& ep : far.extremal_pairs) {
    if (!th::near(ep.value, *far.min_distance, 1e-8)) continue;
    attained = true;
    const auto& xs = std::get<Sphere>(ep.x);
    const auto& ys = std::get<Sphere>(ep.y);
    CHECK(xs.center.norm() <= 1e-7);
    CHECK((ys.center - Eigen::Vector3d(0, 10, 0)).norm() <= 1e-7);
    const double t = euclid::tangent_length_oracle(
        {xs.center, signed_radius(xs)}, {ys.center, signed_radius(ys)});
    CHECK(th::near(t, *far.min_distance, 1e-7));
  }
  CHECK(attained);

  // A cone beside a parallel cylinder: large cone members eventually nest
  // the cylinder, so no tangential distance exists.
  Family cone = make_family(std::vector<Cycle>{Sphere{Eigen::Vector3d(0, 0, 0), 1, 1},
                             Sphere{Eigen::Vector3d(0, 0, 4), 2, 1}},
                            Special::w());
  Family tube = make_family(std::vector<Cycle>{Sphere{Eigen::Vector3d(6, 0, 0), 1, 1},
                             Sphere{Eigen::Vector3d(6, 0, 4), 1, 1}},
                            Special::w());
  PairReport crossed = cone_pair_report(cone, tube);
  CHECK(crossed.classification == PairClass::NoDistance);
  CHECK(!crossed.min_distance);

  // Families sharing a member.
  Cycle shared = Sphere{Eigen::Vector2d(0, 0), 1, 1};
  Family sa = make_family(
      std::vector<Cycle>{shared, Cycle{Sphere{Eigen::Vector2d(4, 0), 1, 1}}}, Special::w());
  Family sb = make_family(
      std::vector<Cycle>{shared, Cycle{Sphere{Eigen::Vector2d(4, 3), 2, 1}}}, Special::w());
  CHECK(cone_pair_report(sa, sb).classification == PairClass::SharedStructure);

  // Parallel strips in the plane: the five-vector gram degenerates, so the
  // pair reports shared structure even though the strips are disjoint.
  auto strip = [](double y0, double r) {
    return make_family(std::vector<Cycle>{Sphere{Eigen::Vector2d(0, y0), r, 1},
                        Sphere{Eigen::Vector2d(4, y0), r, 1}},
                       Special::w());
  };
  PairReport strips = cone_pair_report(strip(0, 1), strip(6, 2));
  CHECK(std::abs(strips.discriminant) <= 1e-9);
  CHECK(strips.classification == PairClass::SharedStructure);

  // Mismatched special vectors are refused.
  Family pen = circle_pencil({0, 0, 0}, {0, 0, 1}, 1);
  CHECK_THROWS_AS(cone_pair_report(pen, pen), InvalidInput);
}

TEST_CASE("cone pair distance against the sweep oracle") {
  // Pairs with a genuine minimum need skew axes, so this lives in R^3.
  std::mt19937 rng(55);
  int done = 0;
  while (done < 10) {
    Sphere a1 = th::rand_sphere(rng, 3), a2 = th::rand_sphere(rng, 3);
    Sphere b1 = th::rand_sphere(rng, 3), b2 = th::rand_sphere(rng, 3);
    a1.orientation = a2.orientation = b1.orientation = b2.orientation = 1;
    // A small slope pushes the apex, and with it the minimizing members,
    // outside the oracle's sweep window.
    const double slope_a = std::abs(a1.radius - a2.radius) /
                           std::max(1e-9, (a1.center - a2.center).norm());
    const double slope_b = std::abs(b1.radius - b2.radius) /
                           std::max(1e-9, (b1.center - b2.center).norm());
    if (slope_a < 0.15 || slope_b < 0.15) continue;
    Family fx, fy;
    try {
      fx = make_family(std::vector<Cycle>{a1, a2}, Special::w());
      fy = make_family(std::vector<Cycle>{b1, b2}, Special::w());
      if (fx.cls != FamilyClass::Hyperbolic || fy.cls != FamilyClass::Hyperbolic)
        continue;
    } catch (const Error&) {
      continue;
    }
    PairReport rep;
    try {
      rep = cone_pair_report(fx, fy);
    } catch (const Error&) {
      continue;
    }
    if (rep.classification != PairClass::DistanceExists) continue;
    if (rep.discriminant > -1e-3) continue;  // keep the oracle well posed

    double oracle;
    try {
      oracle = euclid::cone_min_tangent_oracle(
          euclid::cone_from_members({a1.center, signed_radius(a1)},
                                    {a2.center, signed_radius(a2)}),
          euclid::cone_from_members({b1.center, signed_radius(b1)},
                                    {b2.center, signed_radius(b2)}));
    } catch (const euclid::NoDistance&) {
      continue;
    }
    CHECK(th::near(*rep.min_distance, oracle, 1e-6 * (1 + oracle)));
    ++done;
  }
}
