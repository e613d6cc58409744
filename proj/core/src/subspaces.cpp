#include "liecycles/subspaces.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "liecycles/errors.hpp"

namespace lie {

namespace {

// Solves Gram * c = [X]^T A y for the coefficients of the projection.
// The Gram must be invertible: a degenerate one means the subspace meets
// its own orthogonal complement and no projector exists.
Vec projection_coeffs(const Mat& basis, const Vec& y, const Tolerances& tol) {
  if (basis.rows() != y.size())
    throw InvalidInput("project: dimension mismatch");
  const auto k = basis.cols();
  Mat g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j)
      g(i, j) = g(j, i) = product(basis.col(i), basis.col(j));
  Vec rhs(k);
  for (Eigen::Index i = 0; i < k; ++i) rhs[i] = product(basis.col(i), y);

  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= tol.rank * sv[0])
    throw DegenerateSubspace("projection onto a subspace with singular Gram");
  return svd.solve(rhs);
}

}  // namespace

Vec project(const Mat& basis, const Vec& y, const Tolerances& tol) {
  return basis * projection_coeffs(basis, y, tol);
}

Vec project_complement(const Mat& basis, const Vec& y, const Tolerances& tol) {
  return y - project(basis, y, tol);
}

Vec reflect(const Mat& basis, const Vec& y, const Tolerances& tol) {
  return 2.0 * project(basis, y, tol) - y;
}

Mat complement_basis(const Mat& basis, const Tolerances& tol) {
  const int n = ambient_dim(basis.col(0));
  // v is orthogonal to every basis vector iff [basis]^T A v = 0, so the
  // complement is the kernel of that k x (n+3) map.
  Mat constraint = basis.transpose() * form_matrix(n);
  Eigen::JacobiSVD<Mat> svd(constraint,
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  const double top = sv.size() ? sv[0] : 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol.rank * top) ++rank;
  if (rank < basis.cols())
    throw DependentSpanningSet("complement_basis: dependent spanning set");
  return svd.matrixV().rightCols(basis.rows() - rank);
}

std::vector<Vec> quadric_projection_along(const Vec& x, const Vec& s,
                                          const Tolerances& tol) {
  if (x.norm() == 0 || s.norm() == 0)
    throw InvalidInput("quadric_projection_along: zero vector");
  if (projectively_equal(x, s))
    throw InvalidInput("quadric_projection_along: x and s span no line");
  const double a = product(s, s);
  const double b = product(x, s);
  const double c = product(x, x);
  const double scale_a = product_scale(s, s);
  const double scale_b = product_scale(x, s);
  const double scale_c = product_scale(x, x);

  std::vector<Vec> out;
  if (std::abs(a) <= tol.proper * scale_a) {
    // Line direction on the quadric: at most one affine root.
    if (std::abs(b) <= tol.proper * scale_b) {
      if (std::abs(c) <= tol.proper * scale_c) {
        out.push_back(x);
        out.push_back(s);
      }
    } else {
      out.push_back(x - (c / (2 * b)) * s);
      out.push_back(s);
    }
  } else {
    // (X + l S | X + l S) = a l^2 + 2 b l + c; disc = b^2 - ac = -det Gram(X,S).
    const double disc = b * b - a * c;
    const double scale = b * b + std::abs(a * c);
    if (disc >= -tol.proper * scale && disc <= tol.proper * scale) {
      out.push_back(x - (b / a) * s);
    } else if (disc > 0) {
      const double q = -(b + std::copysign(std::sqrt(disc), b));
      // Roots q/a and c/q; b = 0 makes copysign pick +, q < 0, both fine.
      out.push_back(x + (q / a) * s);
      out.push_back(x + (c / q) * s);
    }
  }

  // Near tangency with x almost parallel to s, a root can collapse into
  // cancellation noise: keep only directions genuinely on the quadric.
  std::erase_if(out, [&](const Vec& z) {
    return z.norm() == 0 ||
           std::abs(product(z, z)) > tol.proper * z.squaredNorm();
  });
  return out;
}

}  // namespace lie
