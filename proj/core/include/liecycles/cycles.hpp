#pragma once

#include <optional>
#include <variant>

#include "liecycles/form.hpp"
#include "liecycles/tolerances.hpp"

namespace lie {

// Euclidean-side cycle descriptions.  Orientation follows the inward-normal
// convention: a positively oriented sphere has its normal pointing into the
// bounded side, a plane's orientation is carried by the sign of its normal.
struct Sphere {
  Eigen::VectorXd center;
  double radius = 0;   // > 0
  int orientation = 1; // +1 or -1
};

struct Point {
  Eigen::VectorXd location;
};

struct Plane {
  Eigen::VectorXd normal; // unit length
  double support = 0;     // normal . q for any point q on the plane
};

// The cycle w: no Euclidean counterpart, shows up as a projection artifact.
struct ImproperW {
  int dimension = 0;
};

using Cycle = std::variant<Sphere, Point, Plane, ImproperW>;

int cycle_dimension(const Cycle& c);

// Homogeneous representative.  Spheres land at (nu, p, 1, +-rho) with
// nu = (rho^2 - |p|^2)/2, points at (-|p|^2/2, p, 1, 0), planes at
// (n.q, -n, 0, -1).  The result is exactly on the quadric up to rounding.
Vec encode(const Cycle& c);

// Inverse of encode on proper vectors.  Classification is by the two
// proper-adjacency slots: |xi3| <= proper*|X| makes a point, |xi2| <=
// proper*|X| a plane, both an ImproperW, neither a sphere.
Cycle decode(const Vec& x, const Tolerances& tol = {});

// X / (X|S).  The usual charts are s = w (spheres, points) and s = r
// (spheres, planes).
Vec chart_coords(const Vec& x, const Vec& s, const Tolerances& tol = {});

// Flip of the last homogeneous coordinate: orientation reversal.
Vec reorient(const Vec& x);

enum class Contact {
  OrientedContact,
  Intersecting,
  Disjoint,
  CommonTangent,
  NoCommonTangent,
  IncidentPoint,
};

// Pairwise invariant of two proper cycles.  Both chart products are kept
// when they exist; the kind condenses them:
//
//   t = (phi_r x | phi_r y)   in [-2,0] -> intersecting at angle
//                             arccos(-t-1); otherwise cosh(boost) = |t+1|
//   u = (phi_w x | phi_w y)   u <= 0 -> tangential distance sqrt(-2u),
//                             u > 0 -> half chord sqrt(2u)
struct PairInvariant {
  Contact kind;
  std::optional<double> angle;            // t in [-2, 0]
  std::optional<double> cosh_boost;       // t outside [-2, 0]
  std::optional<int> boost_sign;          // with cosh_boost: sign of t+1
  std::optional<double> tangent_distance; // u <= 0
  std::optional<double> half_chord;       // u > 0
  std::optional<double> product_r;        // raw t when both in U_r
  std::optional<double> product_w;        // raw u when both in U_w
};

PairInvariant pair_invariant(const Vec& x, const Vec& y,
                             const Tolerances& tol = {});

// Reflection over a nonproper mirror in <r>-perp: geometric inversion
// across the cycle cut out by <mirror, r>.  The mirror must satisfy
// (M|R)=0, (M|M) != 0 and det Gram(M,R) < 0, else InvalidMirror.
Vec invert_across(const Vec& mirror, const Vec& y, const Tolerances& tol = {});

}  // namespace lie
