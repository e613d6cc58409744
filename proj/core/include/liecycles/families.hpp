#pragma once

#include <optional>
#include <vector>

#include "liecycles/cycles.hpp"
#include "liecycles/form.hpp"
#include "liecycles/tolerances.hpp"

namespace lie {

enum class FamilyClass { Hyperbolic, Parabolic, Elliptic };
enum class SpecialKind { Steiner, Cone, Torus };

// Chooses the special vector S of a family: R (Steiner), W (cone) or the
// torus vector rho*W + R.
struct Special {
  SpecialKind kind = SpecialKind::Steiner;
  double rho = 0;

  static Special r() { return {SpecialKind::Steiner, 0}; }
  static Special w() { return {SpecialKind::Cone, 0}; }
  static Special torus(double rho) { return {SpecialKind::Torus, rho}; }

  Vec vector(int n) const;
};

// A hyperbolic/parabolic/elliptic s-family: k proper spanning cycles plus
// the special vector.  Everything downstream assumes the canonical S
// stored here; discriminants are quotient-invariant in the spanning
// vectors but scale with S.
struct Family {
  Mat spanning; // columns, as given (k of them)
  Vec special;
  SpecialKind special_kind;
  double torus_rho = 0;
  Gram gram;    // of spanning + special, unnormalized
  FamilyClass cls;

  int k() const { return static_cast<int>(spanning.cols()); }
  int dimension() const { return static_cast<int>(spanning.rows()) - 3; }
  // spanning and special as one (k+1)-column basis
  Mat subspace() const { return append_column(spanning, special); }
};

Family make_family(const std::vector<Cycle>& cycles, Special special,
                   const Tolerances& tol = {});
Family make_family(const Mat& spanning, Special special,
                   const Tolerances& tol = {});

// delta_{S'}(x, s) = det Gram(X,S,S') / det Gram(X,S).  Defined for
// hyperbolic families and S' orthogonal to S.
double s_discriminant(const Family& f, const Vec& sprime,
                      const Tolerances& tol = {});

// The S'-frame of a family: the projected center C = P_{<X,S>} S' and the
// hyperplane l = { v in <X,S> : (v|C) = 0 }.  h(x) = delta_{S'}(x,s) takes
// its extreme values at the projections of C and the constant (S'|S') on l.
struct FamilyFrame {
  Vec center;
  bool center_is_zero; // S' orthogonal to the whole subspace
  Mat l_basis;         // Euclidean-orthonormal columns; k of them
                       // (k+1 in the center_is_zero case)
  double discriminant; // (S'|S') - (C|C)
};

FamilyFrame family_frame(const Family& f, const Vec& sprime,
                         const Tolerances& tol = {});

// Euclidean geometry of a hyperbolic Steiner family: the common subcycle
// of codimension k.  delta_W = -1/rho^2 gives its radius; the projections
// of C along r are the two minimal spheres; l projects to the planes of
// the family.  delta_W = 0 means the family consists of planes.
struct SubcycleGeometry {
  double delta_w;
  bool all_planes;
  std::optional<double> radius;
  std::optional<Eigen::VectorXd> center;
  std::vector<Sphere> min_spheres; // both orientations
  std::vector<Plane> carrier;      // sampled planes of the family
};

SubcycleGeometry subcycle_geometry(const Family& f, const Tolerances& tol = {});

// Euclidean geometry of a hyperbolic cone family: delta_R = -1/cos^2(a/2)
// gives the half-angle, C projects along r to the unoriented plane pair
// through the vertex orthogonal to the axis, and l projects along w to
// point cycles on the apex set (one vertex for k=2, samples on the apex
// line for k=3).  A cylinder (equal radii) has delta_R = -1, no apex and
// no axis plane.
struct ConeGeometry {
  double delta_r;
  double half_angle; // in [0, pi/2)
  std::vector<Plane> axis_plane; // empty for cylinders
  std::vector<Point> apex_set;
};

ConeGeometry cone_geometry(const Family& f, const Tolerances& tol = {});

// Deterministic sweep of proper members of the family: spanning-coefficient
// directions (circle for k=2, Fibonacci sphere for k=3) projected onto the
// quadric along S.  Up to `count` cycles; w artifacts are dropped.
std::vector<Vec> sample_members(const Family& f, int count,
                                const Tolerances& tol = {});

// Bordered Gram determinants of chart representatives:
//   Contact   det Gram(phi_w xs..., W)     = -(k-1)!^2 vol(contact simplex)^2
//   Centers   det Gram(phi_w xs..., R, W)  = +(k-1)!^2 vol(centers)^2
//   PolarSine det Gram(phi_r xs..., R)     = -psin^2   (spheres through a
//                                            common point)
enum class SimplexMode { Contact, Centers, PolarSine };

double simplex_invariants(const std::vector<Vec>& xs, SimplexMode mode,
                          const Tolerances& tol = {});

}  // namespace lie
