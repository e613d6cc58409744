#include "liecycles/cycles.hpp"

#include <cmath>

#include "liecycles/errors.hpp"
#include "liecycles/subspaces.hpp"

namespace lie {

int cycle_dimension(const Cycle& c) {
  return std::visit(
      [](const auto& g) -> int {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Sphere>)
          return static_cast<int>(g.center.size());
        else if constexpr (std::is_same_v<T, Point>)
          return static_cast<int>(g.location.size());
        else if constexpr (std::is_same_v<T, Plane>)
          return static_cast<int>(g.normal.size());
        else
          return g.dimension;
      },
      c);
}

Vec encode(const Cycle& c) {
  const int n = cycle_dimension(c);
  if (n < 1) throw InvalidInput("encode: ambient dimension must be >= 1");
  Vec x = Vec::Zero(n + 3);
  if (const auto* s = std::get_if<Sphere>(&c)) {
    if (!(s->radius > 0)) throw InvalidInput("encode: sphere radius must be > 0");
    if (s->orientation != 1 && s->orientation != -1)
      throw InvalidInput("encode: orientation must be +1 or -1");
    x[0] = (s->radius * s->radius - s->center.squaredNorm()) / 2;
    x.segment(1, n) = s->center;
    x[n + 1] = 1;
    x[n + 2] = s->orientation * s->radius;
  } else if (const auto* p = std::get_if<Point>(&c)) {
    x[0] = -p->location.squaredNorm() / 2;
    x.segment(1, n) = p->location;
    x[n + 1] = 1;
  } else if (const auto* pl = std::get_if<Plane>(&c)) {
    if (std::abs(pl->normal.norm() - 1.0) > 1e-12)
      throw InvalidInput("encode: plane normal must be unit length");
    x[0] = pl->support;
    x.segment(1, n) = -pl->normal;
    x[n + 2] = -1;
  } else {
    x[0] = 1;
  }
  return x;
}

Cycle decode(const Vec& x, const Tolerances& tol) {
  const int n = ambient_dim(x);
  if (n < 1) throw InvalidInput("decode: vector too short");
  const double scale = x.squaredNorm();
  if (scale == 0) throw NotOnQuadric("decode: zero vector");
  if (std::abs(product(x, x)) > tol.proper * scale)
    throw NotOnQuadric("decode: self-product " + std::to_string(product(x, x)));

  const double norm = x.norm();
  const bool point_slot = std::abs(x[n + 2]) <= tol.proper * norm;
  const bool plane_slot = std::abs(x[n + 1]) <= tol.proper * norm;
  if (point_slot && plane_slot) return ImproperW{n};
  if (point_slot) {
    Vec u = x / x[n + 1];
    return Point{u.segment(1, n)};
  }
  if (plane_slot) {
    Vec u = x / -x[n + 2];  // puts the orientation slot at -1
    return Plane{-u.segment(1, n), u[0]};
  }
  Vec u = x / x[n + 1];
  const double rho = u[n + 2];
  return Sphere{u.segment(1, n), std::abs(rho), rho > 0 ? 1 : -1};
}

Vec chart_coords(const Vec& x, const Vec& s, const Tolerances& tol) {
  const double d = product(x, s);
  if (std::abs(d) <= tol.rank * product_scale(x, s))
    throw OutsideChart("chart_coords: (X|S) = " + std::to_string(d));
  return x / d;
}

Vec reorient(const Vec& x) {
  Vec y = x;
  y[y.size() - 1] = -y[y.size() - 1];
  return y;
}

namespace {

bool in_chart(const Vec& x, const Vec& s, const Tolerances& tol) {
  return std::abs(product(x, s)) > tol.rank * product_scale(x, s);
}

bool is_point_vec(const Vec& x, const Tolerances& tol) {
  return std::abs(x[x.size() - 1]) <= tol.proper * x.norm();
}

bool is_plane_vec(const Vec& x, const Tolerances& tol) {
  return std::abs(x[x.size() - 2]) <= tol.proper * x.norm();
}

}  // namespace

PairInvariant pair_invariant(const Vec& x, const Vec& y,
                             const Tolerances& tol) {
  const int n = ambient_dim(x);
  if (y.size() != x.size())
    throw InvalidInput("pair_invariant: dimension mismatch");
  for (const Vec* v : {&x, &y}) {
    if (std::abs(product(*v, *v)) > tol.proper * v->squaredNorm())
      throw NotOnQuadric("pair_invariant: input off the quadric");
    if (is_point_vec(*v, tol) && is_plane_vec(*v, tol))
      throw InvalidInput("pair_invariant: w carries no pair geometry");
  }

  const Vec r = vec_r(n), w = vec_w(n);
  const bool x_point = is_point_vec(x, tol), y_point = is_point_vec(y, tol);

  PairInvariant inv{};
  if (in_chart(x, r, tol) && in_chart(y, r, tol))
    inv.product_r = product(chart_coords(x, r, tol), chart_coords(y, r, tol));
  if (in_chart(x, w, tol) && in_chart(y, w, tol))
    inv.product_w = product(chart_coords(x, w, tol), chart_coords(y, w, tol));

  if (std::abs(product(x, y)) <= tol.proper * product_scale(x, y)) {
    inv.kind = (x_point || y_point) ? Contact::IncidentPoint
                                    : Contact::OrientedContact;
    return inv;
  }

  // The two chart quantities exist independently of the final kind.
  const bool angle_chart = inv.product_r && !x_point && !y_point;
  const double t = angle_chart ? *inv.product_r : 0;
  const bool meets = angle_chart && t >= -2 && t <= 0;
  if (meets) {
    inv.angle = std::acos(std::clamp(-t - 1, -1.0, 1.0));
  } else if (angle_chart) {
    inv.cosh_boost = std::abs(t + 1);
    inv.boost_sign = t + 1 > 0 ? 1 : -1;
  }
  if (inv.product_w) {
    if (*inv.product_w <= 0)
      inv.tangent_distance = std::sqrt(-2 * *inv.product_w);
    else
      inv.half_chord = std::sqrt(2 * *inv.product_w);
  }

  if (meets) {
    inv.kind = Contact::Intersecting;
    return inv;
  }
  if (inv.tangent_distance) {
    inv.kind = Contact::CommonTangent;
    return inv;
  }
  if (angle_chart) {
    inv.kind = Contact::Disjoint;
    return inv;
  }
  if (inv.half_chord) {
    inv.kind = Contact::NoCommonTangent;
    return inv;
  }

  // Point vs plane: neither chart applies.  The tangent length from a point
  // to a plane is its distance, recovered from the raw product of the
  // w-normalized point and the unit-normal plane representative.
  const Vec& point = x_point ? x : y;
  const Vec& plane = x_point ? y : x;
  const Vec p = point / point[point.size() - 2];
  const Vec q = plane / plane.segment(1, n).norm();
  inv.kind = Contact::CommonTangent;
  inv.tangent_distance = std::abs(product(p, q));
  return inv;
}

Vec invert_across(const Vec& mirror, const Vec& y, const Tolerances& tol) {
  const int n = ambient_dim(mirror);
  const Vec r = vec_r(n);
  const double mm = product(mirror, mirror);
  const double scale = mirror.squaredNorm();
  if (std::abs(product(mirror, r)) > tol.rank * mirror.norm())
    throw InvalidMirror("invert_across: mirror must satisfy (M|R) = 0");
  if (std::abs(mm) <= tol.proper * scale)
    throw InvalidMirror("invert_across: mirror must not lie on the quadric");
  // det Gram(M,R) = -(M|M) with (M|R) = 0; the inversion cycle exists only
  // when that is negative.
  if (mm < 0)
    throw InvalidMirror("invert_across: <mirror,r> misses the quadric");
  return reflect(columns({mirror}), y, tol);
}

}  // namespace lie
