#include "liecycles/interplay.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "liecycles/errors.hpp"
#include "liecycles/subspaces.hpp"

namespace lie {

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

void require_proper(const Vec& y, double tol, const char* op) {
  if (std::abs(product(y, y)) > tol * y.squaredNorm())
    throw NotOnQuadric(std::string(op) + ": cycle is off the quadric");
}

// h(x) = det G(x,Y,S) / (det G(x,S) det G(Y,S)), the family-cycle
// discriminant read at a single (not necessarily proper) x.
double h_value(const Vec& x, const Vec& y, const Vec& s) {
  return gram_det(columns({x, y, s})) /
         (gram_det(columns({x, s})) * gram_det(columns({y, s})));
}

void require_matching(const Family& fx, const Family& fy, const char* op) {
  require_hyperbolic(fx, op);
  require_hyperbolic(fy, op);
  if (fx.dimension() != fy.dimension())
    throw InvalidInput(std::string(op) + ": ambient dimensions differ");
  if (fx.special_kind != fy.special_kind ||
      (fx.special_kind == SpecialKind::Torus && fx.torus_rho != fy.torus_rho))
    throw InvalidInput(std::string(op) + ": special vectors differ");
  if (fx.k() != fy.k())
    throw InvalidInput(std::string(op) + ": spanning counts differ");
}

Mat gram_entries(const Mat& basis) {
  const auto k = basis.cols();
  Mat g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j)
      g(i, j) = g(j, i) = product(basis.col(i), basis.col(j));
  return g;
}

// Coordinate matrix of P_<X,S> P_<Y,S> restricted to <X,S>, in the given
// basis (S last): M = A_XS^{-1} C A_YS^{-1} C^T with C_ij = (XS_i | YS_j).
Mat projector_product_matrix(const Mat& xs, const Mat& ys) {
  const auto kx = xs.cols(), ky = ys.cols();
  Mat c(kx, ky);
  for (Eigen::Index i = 0; i < kx; ++i)
    for (Eigen::Index j = 0; j < ky; ++j)
      c(i, j) = product(xs.col(i), ys.col(j));
  Eigen::PartialPivLU<Mat> ax(gram_entries(xs));
  Eigen::PartialPivLU<Mat> ay(gram_entries(ys));
  return ax.solve(c * ay.solve(c.transpose()));
}

struct Deflated {
  Mat h;                   // Householder mapping e_last <-> e_0
  Mat m2;                  // quotient block, k x k
  Eigen::RowVectorXd wrow; // coupling row above it
};

// S spans an exact eigenvector of M (its coefficient vector is e_last).
// Reflect it onto e_0 so the quotient splits off as the trailing block;
// this sidesteps the defective Jordan block of the (S|S)=0 case.
Deflated deflate_structural(const Mat& m) {
  const auto dim = m.rows();
  const Vec residual = m.col(dim - 1) - Vec::Unit(dim, dim - 1);
  if (residual.norm() > 1e-8 * (1.0 + m.norm()))
    throw NumericalFailure("eigenanalysis: S is not fixed by the projector product, residual " +
                           std::to_string(residual.norm()));
  Vec v = Vec::Unit(dim, dim - 1) - Vec::Unit(dim, 0);
  Mat h = Mat::Identity(dim, dim) - v * v.transpose();  // |v|^2 = 2
  Mat md = h * m * h;
  Deflated d;
  d.h = h;
  d.m2 = md.block(1, 1, dim - 1, dim - 1);
  d.wrow = md.block(0, 1, 1, dim - 1);
  return d;
}

struct RealSpectrum {
  std::vector<double> values;
  std::vector<Vec> vectors;  // columns of quotient size
};

RealSpectrum real_eigen(const Mat& m2) {
  Eigen::EigenSolver<Mat> es(m2);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("eigenanalysis: eigensolver did not converge");
  RealSpectrum out;
  const double scale = m2.norm();
  for (Eigen::Index i = 0; i < m2.rows(); ++i) {
    const auto lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) > 1e-8 * (1.0 + std::abs(lam.real())))
      throw NumericalFailure("eigenanalysis: complex eigenvalue " +
                             std::to_string(lam.real()) + " + " +
                             std::to_string(lam.imag()) + "i");
    Eigen::VectorXcd vc = es.eigenvectors().col(i);
    Vec re = vc.real(), im = vc.imag();
    Vec v = re.norm() >= im.norm() ? re : im;
    if (v.norm() == 0)
      throw NumericalFailure("eigenanalysis: null eigenvector");
    v.normalize();
    if ((m2 * v - lam.real() * v).norm() > 1e-7 * (1.0 + scale))
      throw NumericalFailure("eigenanalysis: eigenpair residual too large");
    out.values.push_back(lam.real());
    out.vectors.push_back(v);
  }
  return out;
}

// Lift a quotient eigenpair back to subspace coordinates through H.
Vec lift_eigvec(const Deflated& d, double lambda, const Vec& v) {
  const auto dim = d.h.rows();
  Vec full = Vec::Zero(dim);
  const double denom = lambda - 1.0;
  const double coupling = d.wrow.dot(v);
  full[0] = std::abs(denom) > 1e-12 ? coupling / denom : 0.0;
  full.tail(dim - 1) = v;
  return d.h * full;
}

// Chart-normalized quadric projection of the invariant plane <T,S>: the
// proper line other than <S>.  Normalizing (t|S)=1 pins scale and sign, so
// products between two such representatives carry geometry.
Vec chart_fixed_cycle(const Vec& t, const Vec& s, const Tolerances& tol) {
  if (std::abs(product(t, s)) <= 1e-9 * product_scale(t, s))
    throw NumericalFailure("eigenanalysis: fixed plane tangent to the quadric");
  std::vector<Vec> roots = quadric_projection_along(t, s, tol);
  for (const Vec& z : roots)
    if (!projectively_equal(z, s)) return z / product(z, s);
  throw NumericalFailure("eigenanalysis: no proper fixed cycle found");
}

}  // namespace

double family_cycle_discriminant(const Family& f, const Vec& y,
                                 const Tolerances& tol) {
  require_hyperbolic(f, "family_cycle_discriminant");
  require_proper(y, tol.proper, "family_cycle_discriminant");
  if (std::abs(product(y, f.special)) <=
      tol.rank * product_scale(y, f.special))
    throw InvalidInput("family_cycle_discriminant: (Y|S) = 0");
  const Mat sub = f.subspace();
  if (column_rank(append_column(sub, y), tol.rank) < f.k() + 2)
    throw DegenerateTriple("family_cycle_discriminant: y lies in the family subspace");
  const double dy = gram_det(columns({y, f.special}));
  return gram_det(append_column(sub, y)) / (f.gram.det * dy);
}

CriticalProjection critical_projection(const Family& f, const Vec& y,
                                       const Tolerances& tol) {
  // Shares every precondition with the discriminant; evaluating it first
  // also validates them.
  const double delta = family_cycle_discriminant(f, y, tol);
  (void)delta;
  const Mat sub = f.subspace();

  CriticalProjection crit;
  crit.projection = project(sub, y, tol);
  crit.h_at_projection = h_value(crit.projection, y, f.special);

  const double ss = product(f.special, f.special);
  if (ss < -tol.classify) {
    // Second critical locus { x in <X,S> : (X|Y) = (X|S) = 0 }; there
    // h(x) = (x|x) / ((x|x)(S|S) - (x|S)^2) collapses to 1/(S|S).
    Mat rows(2, sub.cols());
    for (Eigen::Index j = 0; j < sub.cols(); ++j) {
      rows(0, j) = product(sub.col(j), y);
      rows(1, j) = product(sub.col(j), f.special);
    }
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    Vec x0 = sub * svd.matrixV().rightCols(sub.cols() - 2).col(0);
    crit.second_point = x0;
    crit.second_value = h_value(x0, y, f.special);
  }
  return crit;
}

std::vector<Vec> apollonius(const std::vector<Vec>& cycles,
                            const Tolerances& tol) {
  if (cycles.empty()) throw InvalidInput("apollonius: empty input");
  const int n = ambient_dim(cycles.front());
  if (static_cast<int>(cycles.size()) != n + 1)
    throw InvalidInput("apollonius: need n+1 cycles in R^n, got " +
                       std::to_string(cycles.size()));
  for (const Vec& x : cycles) require_proper(x, tol.proper, "apollonius");
  const Mat inputs = columns(cycles);
  if (column_rank(inputs, tol.rank) < n + 1)
    throw DependentSpanningSet("apollonius: dependent input cycles");

  const Mat comp = complement_basis(inputs, tol);  // two orthonormal columns
  const Vec u = comp.col(0), v = comp.col(1);
  const double a = product(u, u), b = product(u, v), c = product(v, v);

  // (au + bv) on the quadric: a binary quadratic; the complement columns are
  // unit vectors, so tol.classify applies to the coefficients directly.
  std::vector<Vec> out;
  const double t = tol.classify;
  if (std::abs(a) <= t && std::abs(c) <= t) {
    if (std::abs(b) <= t) return {u, v};  // whole line on the quadric
    out.push_back(u);
    out.push_back(v);
    return out;
  }
  // Put the nonzero self-product first.
  const Vec& p = std::abs(a) > std::abs(c) ? u : v;
  const Vec& q = std::abs(a) > std::abs(c) ? v : u;
  const double pp = std::abs(a) > std::abs(c) ? a : c;
  const double qq = std::abs(a) > std::abs(c) ? c : a;
  const double disc = b * b - pp * qq;
  const double scale = b * b + std::abs(pp * qq);
  if (disc < -t * std::max(scale, 1e-300)) return out;
  if (disc <= t * scale) {
    out.push_back(q - (b / pp) * p);
    return out;
  }
  const double root = -(b + std::copysign(std::sqrt(disc), b));
  out.push_back(q + (root / pp) * p);  // z = root/pp solves pp z^2 + 2bz + qq
  out.push_back(q + (qq / root) * p);
  return out;
}

double two_family_discriminant(const Family& fx, const Family& fy,
                               const Tolerances& tol) {
  require_matching(fx, fy, "two_family_discriminant");
  (void)tol;
  Mat joint = fx.spanning;
  for (Eigen::Index j = 0; j < fy.spanning.cols(); ++j)
    joint = append_column(joint, fy.spanning.col(j));
  joint = append_column(joint, fx.special);
  return gram_det(joint) / (fx.gram.det * fy.gram.det);
}

EigenAnalysis projector_eigenanalysis(const Family& fx, const Family& fy,
                                      const Tolerances& tol) {
  require_matching(fx, fy, "projector_eigenanalysis");
  const Mat xs = fx.subspace(), ys = fy.subspace();
  const Vec& s = fx.special;
  const double ss = product(s, s);
  const int k = fx.k();

  Deflated dx = deflate_structural(projector_product_matrix(xs, ys));
  RealSpectrum spec = real_eigen(dx.m2);

  EigenAnalysis out;
  out.degenerate = std::abs(ss) <= tol.classify;

  std::vector<int> keep(spec.values.size());
  for (size_t i = 0; i < keep.size(); ++i) keep[i] = static_cast<int>(i);

  auto padded = [k](const Vec& v) {
    Vec z = Vec::Zero(k + 1);
    z.tail(k) = v;
    return z;
  };
  auto nearest_to_unit = [](const RealSpectrum& sp) {
    int idx = -1;
    double best = 1e300;
    for (size_t i = 0; i < sp.values.size(); ++i) {
      const double gap = std::abs(sp.values[i] - 1.0);
      if (gap < best) { best = gap; idx = static_cast<int>(i); }
    }
    if (idx < 0 || best > 1e-6)
      throw NumericalFailure("eigenanalysis: no unit partner eigenvalue, nearest gap " +
                             std::to_string(best));
    return idx;
  };

  if (out.degenerate) {
    // The defective unit eigenvalue leaves a partner in the quotient; its
    // eigenvector spans, with S, the invariant plane of the X side.
    const int unit = nearest_to_unit(spec);
    Vec t = xs * (dx.h * padded(spec.vectors[unit]));
    keep.erase(std::find(keep.begin(), keep.end(), unit));

    // Mirror computation on the Y side for the matching plane.
    Deflated dy = deflate_structural(projector_product_matrix(ys, xs));
    RealSpectrum spec_y = real_eigen(dy.m2);
    Vec uvec = ys * (dy.h * padded(spec_y.vectors[nearest_to_unit(spec_y)]));

    // The planes must be genuinely invariant, not just spectral artifacts.
    for (const auto& [plane_basis, probe] :
         {std::pair{columns({t, s}), project(xs, project(ys, t, tol), tol)},
          std::pair{columns({uvec, s}), project(ys, project(xs, uvec, tol), tol)}}) {
      Eigen::JacobiSVD<Mat> lsq(plane_basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Vec res = probe - plane_basis * lsq.solve(probe);
      if (res.norm() > 1e-7 * (1.0 + probe.norm()))
        throw NumericalFailure("eigenanalysis: fixed plane verification failed, residual " +
                               std::to_string(res.norm()));
    }

    out.t_hat = chart_fixed_cycle(t, s, tol);
    out.u_hat = chart_fixed_cycle(uvec, s, tol);
  }

  // Remaining pairs, sorted by eigenvalue, nonincreasing.
  std::sort(keep.begin(), keep.end(),
            [&](int i, int j) { return spec.values[i] > spec.values[j]; });
  for (int idx : keep) {
    const double lam = spec.values[idx];
    Vec e = xs * lift_eigvec(dx, lam, spec.vectors[idx]);
    const double ee = product(e, e);
    if (std::abs(ee) > 1e-12 * e.squaredNorm()) e /= std::sqrt(std::abs(ee));
    Vec fvec = project(ys, e, tol);
    const double ff = product(fvec, fvec);
    if (std::abs(ff) > 1e-12 * fvec.squaredNorm())
      fvec /= std::sqrt(std::abs(ff));
    if (product(e, fvec) < 0) fvec = -fvec;
    out.eigenvalues.push_back(lam);
    out.e.push_back(e);
    out.f.push_back(fvec);
  }
  return out;
}

namespace {

double pair_angle(const Vec& x, const Vec& y, const Tolerances& tol) {
  PairInvariant inv = pair_invariant(x, y, tol);
  if (inv.angle) return *inv.angle;
  if (inv.product_r) return std::acos(std::clamp(-*inv.product_r - 1, -1.0, 1.0));
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

PairReport steiner_pair_report(const Family& fx, const Family& fy,
                               const Tolerances& tol) {
  require_matching(fx, fy, "steiner_pair_report");
  if (fx.special_kind != SpecialKind::Steiner)
    throw InvalidInput("steiner_pair_report: requires Steiner families");
  if (fx.dimension() != 3 || fx.k() != 2)
    throw InvalidInput("steiner_pair_report: linked-circle analysis needs pencils in R^3");
  {
    Mat joint = append_column(fx.spanning, fx.special);
    for (Eigen::Index j = 0; j < fy.spanning.cols(); ++j)
      joint = append_column(joint, fy.spanning.col(j));
    if (column_rank(joint, tol.rank) <= fx.k() + 1)
      throw InvalidInput("steiner_pair_report: the pencils coincide");
  }

  PairReport report;
  report.discriminant = two_family_discriminant(fx, fy, tol);
  if (std::abs(report.discriminant) <= tol.classify) {
    report.classification = PairClass::Intersect;
    return report;
  }
  report.classification = report.discriminant < 0 ? PairClass::Linked
                                                  : PairClass::Unlinked;
  if (report.classification != PairClass::Linked) return report;

  // Extreme meeting angles live at the projected eigencycles; report both
  // orientation pairings of each.
  EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
  const Vec r = vec_r(fx.dimension());
  for (size_t i = 0; i < eig.eigenvalues.size(); ++i) {
    // A vanishing partner direction (lambda = 0 with e orthogonal to the
    // whole other pencil) has no member pair to report.
    if (eig.e[i].norm() == 0 || eig.f[i].norm() == 0) continue;
    try {
      std::vector<Vec> es = quadric_projection_along(eig.e[i], r, tol);
      std::vector<Vec> fs = quadric_projection_along(eig.f[i], r, tol);
      if (es.empty() || fs.empty()) continue;
      for (const Vec& fhat : fs) {
        ExtremalPair pair;
        pair.x = decode(es.front(), tol);
        pair.y = decode(fhat, tol);
        pair.value = pair_angle(es.front(), fhat, tol);
        report.extremal_pairs.push_back(pair);
      }
    } catch (const Error&) {
      // Improper or degenerate eigendirections contribute nothing.
      continue;
    }
  }
  return report;
}

PairReport cone_pair_report(const Family& fx, const Family& fy,
                            const Tolerances& tol) {
  require_matching(fx, fy, "cone_pair_report");
  if (fx.special_kind != SpecialKind::Cone)
    throw InvalidInput("cone_pair_report: requires cone families");

  PairReport report;
  report.discriminant = two_family_discriminant(fx, fy, tol);
  if (std::abs(report.discriminant) <= tol.classify) {
    report.classification = PairClass::SharedStructure;
    return report;
  }
  if (report.discriminant > 0) {
    report.classification = PairClass::NoDistance;
    return report;
  }

  report.classification = PairClass::DistanceExists;
  EigenAnalysis eig = projector_eigenanalysis(fx, fy, tol);
  if (!eig.t_hat || !eig.u_hat)
    throw NumericalFailure("cone_pair_report: missing fixed cycles");
  const double tu = product(*eig.t_hat, *eig.u_hat);
  if (tu > 0)
    throw NumericalFailure("cone_pair_report: fixed-cycle product positive at delta < 0");
  report.min_distance = std::sqrt(-2.0 * tu);
  ExtremalPair pair;
  pair.x = decode(*eig.t_hat, tol);
  pair.y = decode(*eig.u_hat, tol);
  pair.value = *report.min_distance;
  report.extremal_pairs.push_back(pair);
  return report;
}

}  // namespace lie
