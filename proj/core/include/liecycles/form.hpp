#pragma once

#include <Eigen/Dense>
#include <initializer_list>
#include <vector>

namespace lie {

// A cycle in R^n lives as a projective point of R^{n+3} with coordinate
// layout (xi0, xi1 in R^n, xi2, xi3).  The form below has index 2; its
// isotropic vectors are the proper cycles.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline int ambient_dim(const Vec& x) { return static_cast<int>(x.size()) - 3; }

// (X|Y) = xi0*eta2 + xi1.eta1 + xi2*eta0 - xi3*eta3.
// Arranged so that product(x,y) and product(y,x) are the same floating
// point value, not merely close.
double product(const Vec& x, const Vec& y);

// Matrix A of the form, (n+3)x(n+3); (X|Y) = X^T A Y.
Mat form_matrix(int n);

// The two distinguished improper/point-at-infinity representatives and the
// torus special vector rho*W + R.  These are exact, never renormalized.
Vec vec_r(int n);
Vec vec_w(int n);
Vec torus_special(int n, double rho);

// Columns of the result are the given vectors.
Mat columns(std::initializer_list<Vec> vs);
Mat columns(const std::vector<Vec>& vs);
Mat append_column(const Mat& basis, const Vec& v);

struct Gram {
  Mat entries;  // pairwise products, symmetric by construction
  double det;   // via partially pivoted LU
  int rank;     // singular values above 1e-10 * largest
};

Gram gram(const Mat& basis);

// Determinant of the Gram matrix alone (no rank bookkeeping).
double gram_det(const Mat& basis);

// Same, but columns are first scaled to unit Euclidean norm.  All sign
// classifications go through this: the sign is scale-invariant while the
// magnitude is not, and thresholds need a fixed scale.
double gram_det_normalized(const Mat& basis);

bool projectively_equal(const Vec& a, const Vec& b, double tol = 1e-9);

// |x| |y|, the natural scale for bounds on (x|y).
inline double product_scale(const Vec& x, const Vec& y) {
  return x.norm() * y.norm();
}

}  // namespace lie
