#include "liecycles/families.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

#include "liecycles/errors.hpp"
#include "liecycles/subspaces.hpp"

namespace lie {

Vec Special::vector(int n) const {
  switch (kind) {
    case SpecialKind::Steiner: return vec_r(n);
    case SpecialKind::Cone: return vec_w(n);
    case SpecialKind::Torus: return torus_special(n, rho);
  }
  throw InvalidInput("Special::vector: bad kind");
}

namespace {

int column_rank(const Mat& m, double rel_tol) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > rel_tol * sv[0]) ++rank;
  return rank;
}

void require_hyperbolic(const Family& f, const char* op) {
  if (f.cls != FamilyClass::Hyperbolic)
    throw InvalidInput(std::string(op) + ": family is not hyperbolic");
}

}  // namespace

Family make_family(const Mat& spanning, Special special,
                   const Tolerances& tol) {
  const int n = static_cast<int>(spanning.rows()) - 3;
  const int k = static_cast<int>(spanning.cols());
  if (n < 1) throw InvalidInput("make_family: vectors too short");
  if (k < 2 || k > n)
    throw InvalidInput("make_family: need 2 <= k <= n spanning cycles, got " +
                       std::to_string(k));
  for (int j = 0; j < k; ++j) {
    const Vec x = spanning.col(j);
    if (std::abs(product(x, x)) > tol.proper * x.squaredNorm())
      throw NotOnQuadric("make_family: spanning cycle " + std::to_string(j) +
                         " is off the quadric");
  }

  Family f;
  f.spanning = spanning;
  f.special = special.vector(n);
  f.special_kind = special.kind;
  f.torus_rho = special.rho;

  const Mat sub = f.subspace();
  if (column_rank(sub, tol.rank) < k + 1)
    throw DependentSpanningSet("make_family: spanning set plus special is rank deficient");

  f.gram = gram(sub);
  const double d = gram_det_normalized(sub);
  if (d < -tol.classify)
    f.cls = FamilyClass::Hyperbolic;
  else if (d > tol.classify)
    f.cls = FamilyClass::Elliptic;
  else
    f.cls = FamilyClass::Parabolic;
  return f;
}

Family make_family(const std::vector<Cycle>& cycles, Special special,
                   const Tolerances& tol) {
  std::vector<Vec> vecs;
  vecs.reserve(cycles.size());
  for (const Cycle& c : cycles) vecs.push_back(encode(c));
  return make_family(columns(vecs), special, tol);
}

double s_discriminant(const Family& f, const Vec& sprime,
                      const Tolerances& tol) {
  require_hyperbolic(f, "s_discriminant");
  if (sprime.size() != f.special.size())
    throw InvalidInput("s_discriminant: dimension mismatch");
  if (std::abs(product(sprime, f.special)) >
      tol.rank * product_scale(sprime, f.special))
    throw InvalidInput("s_discriminant: S' must be orthogonal to S");
  const Mat sub = f.subspace();
  const Mat bordered = append_column(sub, sprime);
  if (column_rank(bordered, tol.rank) < f.k() + 2)
    throw InvalidInput("s_discriminant: S' lies in the family subspace");
  return gram_det(bordered) / f.gram.det;
}

FamilyFrame family_frame(const Family& f, const Vec& sprime,
                         const Tolerances& tol) {
  require_hyperbolic(f, "family_frame");
  const Mat sub = f.subspace();
  const Vec c = project(sub, sprime, tol);

  FamilyFrame frame;
  frame.center = c;
  frame.center_is_zero = c.norm() <= tol.proper * sprime.norm();
  frame.discriminant = product(sprime, sprime) - product(c, c);

  if (frame.center_is_zero) {
    // S' orthogonal to the whole subspace: l is everything.
    Eigen::HouseholderQR<Mat> qr(sub);
    frame.l_basis = qr.householderQ() * Mat::Identity(sub.rows(), sub.cols());
    return frame;
  }

  // l = kernel of v -> (v|C) on the subspace, in coefficient space.
  Eigen::RowVectorXd row(sub.cols());
  for (Eigen::Index j = 0; j < sub.cols(); ++j)
    row[j] = product(sub.col(j), c);
  Eigen::JacobiSVD<Eigen::RowVectorXd> svd(row, Eigen::ComputeFullV);
  Mat coeffs = svd.matrixV().rightCols(sub.cols() - 1);
  Mat l = sub * coeffs;
  Eigen::HouseholderQR<Mat> qr(l);
  frame.l_basis = qr.householderQ() * Mat::Identity(l.rows(), l.cols());
  return frame;
}

namespace {

// Quadric points reached from v along s, decoded; w artifacts dropped.
std::vector<Cycle> decoded_projections(const Vec& v, const Vec& s,
                                       const Tolerances& tol) {
  std::vector<Cycle> out;
  if (projectively_equal(v, s)) return out;
  for (const Vec& z : quadric_projection_along(v, s, tol)) {
    Cycle c = decode(z, tol);
    if (!std::holds_alternative<ImproperW>(c)) out.push_back(c);
  }
  return out;
}

bool same_plane(const Plane& a, const Plane& b, double tol) {
  return (a.normal - b.normal).norm() <= tol &&
         std::abs(a.support - b.support) <= tol;
}

bool same_point(const Point& a, const Point& b, double tol) {
  return (a.location - b.location).norm() <= tol;
}

}  // namespace

SubcycleGeometry subcycle_geometry(const Family& f, const Tolerances& tol) {
  if (f.special_kind != SpecialKind::Steiner)
    throw InvalidInput("subcycle_geometry: requires a Steiner family");
  require_hyperbolic(f, "subcycle_geometry");
  const int n = f.dimension();
  const Vec w = vec_w(n);
  const Vec r = vec_r(n);

  SubcycleGeometry geo;
  geo.delta_w = s_discriminant(f, w, tol);
  geo.all_planes = std::abs(geo.delta_w) <= tol.classify;

  FamilyFrame frame = family_frame(f, w, tol);
  if (!geo.all_planes && geo.delta_w < 0) {
    geo.radius = std::sqrt(-1.0 / geo.delta_w);
    for (const Cycle& c : decoded_projections(frame.center, r, tol))
      if (const auto* s = std::get_if<Sphere>(&c)) {
        geo.min_spheres.push_back(*s);
        if (!geo.center) geo.center = s->center;
      }
  }
  // Every vector of l has (v|W) = 0, so its quadric points are planes.
  for (Eigen::Index j = 0; j < frame.l_basis.cols(); ++j)
    for (const Cycle& c : decoded_projections(frame.l_basis.col(j), r, tol))
      if (const auto* p = std::get_if<Plane>(&c)) {
        bool fresh = true;
        for (const Plane& q : geo.carrier)
          if (same_plane(*p, q, 1e-9)) fresh = false;
        if (fresh) geo.carrier.push_back(*p);
      }
  return geo;
}

ConeGeometry cone_geometry(const Family& f, const Tolerances& tol) {
  if (f.special_kind != SpecialKind::Cone)
    throw InvalidInput("cone_geometry: requires a cone family");
  require_hyperbolic(f, "cone_geometry");
  const int n = f.dimension();
  const Vec w = vec_w(n);
  const Vec r = vec_r(n);

  ConeGeometry geo;
  geo.delta_r = s_discriminant(f, r, tol);
  // delta_R = -1/cos^2(a/2) <= -1; the excess over -1 is sin^2(a/2).
  geo.half_angle = std::asin(std::sqrt(std::max(0.0, 1.0 + 1.0 / geo.delta_r)));

  FamilyFrame frame = family_frame(f, r, tol);
  // Equal radii make a cylinder: the frame center collapses onto w and the
  // axis plane recedes to infinity, so the list stays empty.
  if (!projectively_equal(frame.center, w, 1e-7))
    for (const Cycle& c : decoded_projections(frame.center, r, tol))
      if (const auto* p = std::get_if<Plane>(&c)) geo.axis_plane.push_back(*p);

  // l is orthogonal to r, so projecting along w yields point cycles (the
  // vertex for k=2, samples of the apex line for k=3).
  for (Eigen::Index j = 0; j < frame.l_basis.cols(); ++j)
    for (const Cycle& c : decoded_projections(frame.l_basis.col(j), w, tol))
      if (const auto* p = std::get_if<Point>(&c)) {
        bool fresh = true;
        for (const Point& q : geo.apex_set)
          if (same_point(*p, q, 1e-9)) fresh = false;
        if (fresh) geo.apex_set.push_back(*p);
      }
  return geo;
}

std::vector<Vec> sample_members(const Family& f, int count,
                                const Tolerances& tol) {
  if (count < 1) throw InvalidInput("sample_members: count must be positive");
  const int k = f.k();
  std::vector<Vec> out;
  auto push_projections = [&](const Vec& v) {
    if (static_cast<int>(out.size()) >= count) return;
    if (v.norm() == 0 || projectively_equal(v, f.special)) return;
    for (const Vec& z : quadric_projection_along(v, f.special, tol)) {
      if (static_cast<int>(out.size()) >= count) return;
      if (projectively_equal(z, f.special)) continue;
      out.push_back(z);
    }
  };

  if (k == 2) {
    // Directions over half the circle: projective sweep of the pencil.
    const int steps = count;  // up to two members per direction
    for (int i = 0; i < steps && static_cast<int>(out.size()) < count; ++i) {
      const double th = std::numbers::pi * i / steps;
      push_projections(std::cos(th) * f.spanning.col(0) +
                       std::sin(th) * f.spanning.col(1));
    }
  } else if (k == 3) {
    // Fibonacci half-sphere in coefficient space.
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count && static_cast<int>(out.size()) < count; ++i) {
      const double z = (i + 0.5) / count;  // upper half only: projective
      const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = ga * i;
      push_projections(rad * std::cos(th) * f.spanning.col(0) +
                       rad * std::sin(th) * f.spanning.col(1) +
                       z * f.spanning.col(2));
    }
  } else {
    throw Unsupported("sample_members: k > 3 sweep not implemented");
  }
  return out;
}

double simplex_invariants(const std::vector<Vec>& xs, SimplexMode mode,
                          const Tolerances& tol) {
  if (xs.empty()) throw InvalidInput("simplex_invariants: empty input");
  const int n = ambient_dim(xs.front());
  const Vec w = vec_w(n);
  const Vec r = vec_r(n);
  const Vec& chart = mode == SimplexMode::PolarSine ? r : w;

  std::vector<Vec> cols;
  cols.reserve(xs.size() + 2);
  for (const Vec& x : xs) cols.push_back(chart_coords(x, chart, tol));
  switch (mode) {
    case SimplexMode::Contact: cols.push_back(w); break;
    case SimplexMode::Centers: cols.push_back(r); cols.push_back(w); break;
    case SimplexMode::PolarSine: cols.push_back(r); break;
  }
  return gram_det(columns(cols));
}

}  // namespace lie
