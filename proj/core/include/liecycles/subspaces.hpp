#pragma once

#include <vector>

#include "liecycles/form.hpp"
#include "liecycles/tolerances.hpp"

namespace lie {

// Orthogonal projection onto span(basis) with respect to the form:
// P y = [X] A_X^{-1} [X]^T A y.  Requires a nondegenerate Gram.
// A zero result is legitimate (y orthogonal to the subspace) and returned
// as such; callers that care must test for it.
Vec project(const Mat& basis, const Vec& y, const Tolerances& tol = {});

// (Id - P) y.
Vec project_complement(const Mat& basis, const Vec& y, const Tolerances& tol = {});

// Reflection fixing span(basis) pointwise and negating its complement:
// L y = 2 P y - y.  Preserves all products.
Vec reflect(const Mat& basis, const Vec& y, const Tolerances& tol = {});

// n+3-k vectors spanning the form-orthogonal complement of span(basis),
// Euclidean-orthonormal for output stability.
Mat complement_basis(const Mat& basis, const Tolerances& tol = {});

// Solutions of (X + lambda S | X + lambda S) = 0, i.e. the intersection of
// the projective line through x and s with the quadric, as representatives
// x + lambda s (s itself appended when it is a solution).
//
// (S|S) != 0: plain quadratic, 0/1/2 roots by the sign of the discriminant
// (S|S)=0, (X|S) != 0: the one linear root, then s
// (S|S)=0, (X|S)=0:    empty unless (X|X)=0 too, in which case the whole
//                      line lies on the quadric and {x, s} is returned
//
// Roots use the cancellation-free form q = -(b + sign(b) sqrt(b^2 - ac)).
std::vector<Vec> quadric_projection_along(const Vec& x, const Vec& s,
                                          const Tolerances& tol = {});

}  // namespace lie
