#pragma once

// Brute-force Euclidean reference computations for the test suite.  Every
// formula here is elementary coordinate geometry; nothing in this header or
// its implementation touches the homogeneous machinery, so agreement between
// the two sides is meaningful evidence rather than a tautology.

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

namespace euclid {

struct NoIntersection : std::runtime_error {
  NoIntersection() : std::runtime_error("circles do not intersect") {}
};
struct NoCommonTangent : std::runtime_error {
  NoCommonTangent() : std::runtime_error("no common tangent line") {}
};
struct Ambiguous : std::runtime_error {
  Ambiguous() : std::runtime_error("curves too close to resolve") {}
};
struct NoDistance : std::runtime_error {
  NoDistance() : std::runtime_error("some pair admits no tangent length") {}
};

// Circle or sphere with radius signed by orientation (positive = inward
// normal).  center.size() fixes the ambient dimension.
struct Circle {
  Eigen::VectorXd center;
  double radius = 0;
};

// Meeting angle of two intersecting circles/spheres, measured so that
// oriented contact comes out as pi:  cos a = -(r1^2 + r2^2 - |dp|^2)/(2 r1 r2)
// with signed radii.  Throws NoIntersection when the unsigned triangle
// inequality fails.
double angle_oracle(const Circle& c1, const Circle& c2);

// Length of the common oriented tangent segment,
// sqrt(|dp|^2 - (r1 - r2)^2) with signed radii; NoCommonTangent when the
// radicand is negative.
double tangent_length_oracle(const Circle& c1, const Circle& c2);

// Closed polyline in R^3; first point is implicitly also the last.
struct SampledCurve {
  std::vector<Eigen::Vector3d> points;
};

// count points around the circle of the given center/radius in the plane
// orthogonal to normal.
SampledCurve sample_circle(const Eigen::Vector3d& center,
                           const Eigen::Vector3d& normal, double radius,
                           int count = 512);

// Gauss double sum over segment midpoints, rounded to the nearest integer.
// Throws Ambiguous when the curves pass within 1e-6 of each other or the
// sum lands further than 0.1 from an integer.
int linking_number_oracle(const SampledCurve& a, const SampledCurve& b);

struct ApolloniusSolutions {
  std::vector<Circle> circles;
  bool newton_converged = true;  // false: every seed diverged (empty is then
                                 // a warning, not a verdict)
};

// All oriented circles tangent to three given oriented circles in R^2.
// Differencing the tangency equations |z - p_i|^2 = (r - r_i)^2 leaves a
// quadratic in the signed radius; its real roots are polished by Newton.
// Oriented tangent *lines* are out of scope and simply not reported.
ApolloniusSolutions apollonius_oracle(const std::vector<Circle>& circles);

// One-parameter family of circles/spheres inscribed in a cone (or cylinder)
// given by Euclidean data only.  Cone: member at parameter t is centered at
// apex + t*axis with signed radius t*sin_half_angle.  Cylinder
// (sin_half_angle == 0): centered at apex + t*axis with constant signed
// radius `radius`.
struct ConeFamily {
  Eigen::VectorXd apex;    // axis base point for cylinders
  Eigen::VectorXd axis;    // unit direction
  double sin_half_angle = 0;
  double radius = 0;       // cylinders only
  Circle member(double t) const;
};

// Family through two members: centers collinear, signed radius linear along
// the axis.  Equal signed radii give a cylinder.
ConeFamily cone_from_members(const Circle& a, const Circle& b);

// Minimal tangent length over all cross pairs of the two families: coarse
// grid over (t1, t2), then Newton on the quadratic squared length (falling
// back to alternating golden-section when the Hessian degenerates).  Throws
// NoDistance if any sampled pair lacks a tangent length.
double cone_min_tangent_oracle(const ConeFamily& fx, const ConeFamily& fy,
                               double t_range = 40.0);

}  // namespace euclid
