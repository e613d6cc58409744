#include "liecycles/form.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "liecycles/errors.hpp"

namespace lie {

double product(const Vec& x, const Vec& y) {
  const auto n = x.size();
  if (n != y.size() || n < 4)
    throw InvalidInput("product: sizes " + std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()));
  // Symmetric grouping: each term is commutative in (x,y), so swapping the
  // arguments reproduces the identical double.
  double acc = x[0] * y[n - 2] + x[n - 2] * y[0] - x[n - 1] * y[n - 1];
  for (Eigen::Index i = 1; i < n - 2; ++i) acc += x[i] * y[i];
  return acc;
}

Mat form_matrix(int n) {
  if (n < 1) throw InvalidInput("form_matrix: n must be >= 1");
  Mat a = Mat::Zero(n + 3, n + 3);
  a(0, n + 1) = 1;
  a(n + 1, 0) = 1;
  for (int i = 1; i <= n; ++i) a(i, i) = 1;
  a(n + 2, n + 2) = -1;
  return a;
}

Vec vec_r(int n) {
  Vec r = Vec::Zero(n + 3);
  r[n + 2] = 1;
  return r;
}

Vec vec_w(int n) {
  Vec w = Vec::Zero(n + 3);
  w[0] = 1;
  return w;
}

Vec torus_special(int n, double rho) {
  Vec s = Vec::Zero(n + 3);
  s[0] = rho;
  s[n + 2] = 1;
  return s;
}

Mat columns(std::initializer_list<Vec> vs) {
  return columns(std::vector<Vec>(vs));
}

Mat columns(const std::vector<Vec>& vs) {
  if (vs.empty()) throw InvalidInput("columns: empty list");
  Mat m(vs.front().size(), static_cast<Eigen::Index>(vs.size()));
  for (size_t j = 0; j < vs.size(); ++j) {
    if (vs[j].size() != m.rows())
      throw InvalidInput("columns: mixed vector sizes");
    m.col(static_cast<Eigen::Index>(j)) = vs[j];
  }
  return m;
}

Mat append_column(const Mat& basis, const Vec& v) {
  if (basis.rows() != v.size())
    throw InvalidInput("append_column: row count mismatch");
  Mat m(basis.rows(), basis.cols() + 1);
  m.leftCols(basis.cols()) = basis;
  m.col(basis.cols()) = v;
  return m;
}

Gram gram(const Mat& basis) {
  const auto k = basis.cols();
  Gram g;
  g.entries = Mat(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j)
      g.entries(i, j) = g.entries(j, i) = product(basis.col(i), basis.col(j));
  g.det = g.entries.determinant();
  Eigen::JacobiSVD<Mat> svd(g.entries);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv[0] : 0.0;
  g.rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-10 * top) ++g.rank;
  return g;
}

double gram_det(const Mat& basis) {
  const auto k = basis.cols();
  Mat g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j)
      g(i, j) = g(j, i) = product(basis.col(i), basis.col(j));
  return g.determinant();
}

double gram_det_normalized(const Mat& basis) {
  Mat unit = basis;
  for (Eigen::Index j = 0; j < unit.cols(); ++j) {
    const double norm = unit.col(j).norm();
    if (norm == 0) throw InvalidInput("gram_det_normalized: zero column");
    unit.col(j) /= norm;
  }
  return gram_det(unit);
}

bool projectively_equal(const Vec& a, const Vec& b, double tol) {
  if (a.size() != b.size()) return false;
  const double na = a.norm(), nb = b.norm();
  if (na == 0 || nb == 0) return na == nb;
  const Vec ua = a / na;
  const Vec ub = b / nb;
  return std::min((ua - ub).norm(), (ua + ub).norm()) <= tol;
}

}  // namespace lie
