#pragma once

#include <optional>
#include <vector>

#include "liecycles/families.hpp"

namespace lie {

// delta(x, y, s) = det Gram(X,Y,S) / (det Gram(X,S) det Gram(Y,S)).
// Nonpositive iff the cofamily of f contains a cycle tangent to y.
// For cone families this is -v^2 with v the tangential distance between
// y and the cone; for Steiner families -sin^2 of the meeting angle.
double family_cycle_discriminant(const Family& f, const Vec& y,
                                 const Tolerances& tol = {});

// h(x) = delta(x, y, s) restricted to the family is critical at the Lie
// projection of y, where it equals the triple discriminant.  When
// (S|S) < 0 there is a second critical locus { x : (X|Y) = 0 } on which
// h = 1/(S|S); one representative is returned.
struct CriticalProjection {
  Vec projection;
  double h_at_projection;
  std::optional<Vec> second_point;
  std::optional<double> second_value;
};

CriticalProjection critical_projection(const Family& f, const Vec& y,
                                       const Tolerances& tol = {});

// Oriented cycles tangent to all n+1 given independent cycles: the
// complement line intersected with the quadric.  0, 1 or 2 solutions by
// the sign of det Gram(inputs) (+, 0, - respectively).
std::vector<Vec> apollonius(const std::vector<Vec>& cycles,
                            const Tolerances& tol = {});

// delta(x, y, s) for two same-kind hyperbolic families; zero iff they
// share a cycle or their cofamilies meet.
double two_family_discriminant(const Family& fx, const Family& fy,
                               const Tolerances& tol = {});

// Spectrum of P_<X,S> P_<Y,S> on the small coordinate matrix, with the
// structural eigenpair (1, S) deflated exactly.  E_i live in <X,S>, the
// matched F_i = P_<Y,S> E_i in <Y,S>; both are normalized to unit
// self-product when that is positive, so (E_i|F_i) = sqrt(lambda_i).
//
// For (S|S) = 0 the unit eigenvalue is defective; the invariant planes
// <T,S> and <U,S> replace its missing eigenvector, reported through their
// chart-normalized quadric projections t_hat, u_hat with
// (t_hat|u_hat) = -d_min^2/2.
struct EigenAnalysis {
  std::vector<double> eigenvalues; // nonincreasing, structural 1 removed
  std::vector<Vec> e;              // in <X,S>
  std::vector<Vec> f;              // in <Y,S>
  bool degenerate = false;         // (S|S) = 0 path
  std::optional<Vec> t_hat, u_hat;
};

EigenAnalysis projector_eigenanalysis(const Family& fx, const Family& fy,
                                      const Tolerances& tol = {});

enum class PairClass {
  Intersect,       // Steiner, |delta| <= classify
  Linked,          // Steiner, delta < 0
  Unlinked,        // Steiner, delta > 0
  SharedStructure, // cone, |delta| <= classify
  DistanceExists,  // cone, delta < 0
  NoDistance,      // cone, delta > 0
};

struct ExtremalPair {
  Cycle x, y;
  double value; // meeting angle (Steiner) or tangential distance (cone)
};

struct PairReport {
  double discriminant;
  PairClass classification;
  std::vector<ExtremalPair> extremal_pairs;
  std::optional<double> min_distance; // cone DistanceExists only
};

// Linked / unlinked / intersecting classification of two Steiner pencils
// in R^3.  For linked pairs the extreme meeting angles arccos(-sqrt(l_i))
// are attained at the projections of the eigencycles; both orientation
// pairings are reported.
PairReport steiner_pair_report(const Family& fx, const Family& fy,
                               const Tolerances& tol = {});

// Tangential-distance classification of two cone families.  delta < 0:
// every cross pair has a tangential distance, minimal at the projected
// fixed-line pair with d_min = sqrt(-2 (t_hat|u_hat)).
PairReport cone_pair_report(const Family& fx, const Family& fy,
                            const Tolerances& tol = {});

}  // namespace lie
