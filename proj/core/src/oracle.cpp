#include "liecycles/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace euclid {

double angle_oracle(const Circle& c1, const Circle& c2) {
  const double d2 = (c1.center - c2.center).squaredNorm();
  const double r1 = std::abs(c1.radius), r2 = std::abs(c2.radius);
  // Unsigned triangle inequality: the circles must actually meet.
  if (d2 > (r1 + r2) * (r1 + r2) || d2 < (r1 - r2) * (r1 - r2))
    throw NoIntersection();
  // Signed radii fold the orientation convention into the cosine.
  const double cosa = -(c1.radius * c1.radius + c2.radius * c2.radius - d2) /
                      (2 * c1.radius * c2.radius);
  return std::acos(std::clamp(cosa, -1.0, 1.0));
}

double tangent_length_oracle(const Circle& c1, const Circle& c2) {
  const double d2 = (c1.center - c2.center).squaredNorm();
  const double dr = c1.radius - c2.radius;
  const double rad = d2 - dr * dr;
  if (rad < 0) throw NoCommonTangent();
  return std::sqrt(rad);
}

SampledCurve sample_circle(const Eigen::Vector3d& center,
                           const Eigen::Vector3d& normal, double radius,
                           int count) {
  Eigen::Vector3d n = normal.normalized();
  Eigen::Vector3d seed =
      std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
  Eigen::Vector3d e1 = n.cross(seed).normalized();
  Eigen::Vector3d e2 = n.cross(e1);
  SampledCurve curve;
  curve.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double th = 2 * std::numbers::pi * i / count;
    curve.points.push_back(center + radius * (std::cos(th) * e1 + std::sin(th) * e2));
  }
  return curve;
}

int linking_number_oracle(const SampledCurve& a, const SampledCurve& b) {
  const auto& pa = a.points;
  const auto& pb = b.points;
  if (pa.size() < 3 || pb.size() < 3) throw Ambiguous();

  double sum = 0;
  for (size_t i = 0; i < pa.size(); ++i) {
    const Eigen::Vector3d da = pa[(i + 1) % pa.size()] - pa[i];
    const Eigen::Vector3d ma = pa[i] + 0.5 * da;
    for (size_t j = 0; j < pb.size(); ++j) {
      const Eigen::Vector3d db = pb[(j + 1) % pb.size()] - pb[j];
      const Eigen::Vector3d mb = pb[j] + 0.5 * db;
      const Eigen::Vector3d sep = mb - ma;
      const double dist = sep.norm();
      if (dist < 1e-6) throw Ambiguous();
      sum += da.cross(db).dot(sep) / (dist * dist * dist);
    }
  }
  sum /= 4 * std::numbers::pi;
  const double nearest = std::round(sum);
  if (std::abs(sum - nearest) > 0.1) throw Ambiguous();
  return static_cast<int>(nearest);
}

ApolloniusSolutions apollonius_oracle(const std::vector<Circle>& circles) {
  if (circles.size() != 3 || circles[0].center.size() != 2)
    throw std::invalid_argument("apollonius_oracle: three plane circles required");

  // Oriented tangency to each input: |z - p_i|^2 - (r - r_i)^2 = 0.
  // Differences of the three equations are linear in (z, r), so the center
  // is an affine function of the signed radius and a single quadratic in r
  // remains; each real root is polished by Newton on the full system.
  const auto residual = [&](const Eigen::Vector3d& zr) {
    Eigen::Vector3d f;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d dz = zr.head<2>() - circles[i].center;
      const double dr = zr[2] - circles[i].radius;
      f[i] = dz.squaredNorm() - dr * dr;
    }
    return f;
  };
  const auto jacobian = [&](const Eigen::Vector3d& zr) {
    Eigen::Matrix3d j;
    for (int i = 0; i < 3; ++i) {
      const Eigen::Vector2d dz = zr.head<2>() - circles[i].center;
      j(i, 0) = 2 * dz.x();
      j(i, 1) = 2 * dz.y();
      j(i, 2) = -2 * (zr[2] - circles[i].radius);
    }
    return j;
  };

  double spread = 1;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      spread = std::max(spread, (circles[i].center - circles[j].center).norm());

  const auto polish =
      [&](Eigen::Vector3d zr) -> std::optional<Eigen::Vector3d> {
    for (int it = 0; it < 40; ++it) {
      const Eigen::Vector3d f = residual(zr);
      if (f.norm() < 1e-12 * (1 + spread * spread)) return zr;
      const Eigen::Vector3d step = jacobian(zr).fullPivLu().solve(f);
      if (!step.allFinite()) return std::nullopt;
      zr -= step;
      if (!zr.allFinite()) return std::nullopt;
    }
    if (residual(zr).norm() < 1e-9 * (1 + spread * spread)) return zr;
    return std::nullopt;
  };

  ApolloniusSolutions out;
  const auto push = [&](const Eigen::Vector3d& zr) {
    for (const Circle& got : out.circles)
      if ((got.center - zr.head<2>()).norm() + std::abs(got.radius - zr[2]) <
          1e-6)
        return;
    out.circles.push_back({zr.head<2>(), zr[2]});
  };

  // eq_0 - eq_j:  2 (p_0 - p_j) . z - 2 (r_0 - r_j) r = |p_0|^2 - |p_j|^2
  //                                                     - r_0^2 + r_j^2.
  Eigen::Matrix2d lhs;
  Eigen::Vector2d rhs, slope;
  for (int j = 1; j < 3; ++j) {
    lhs.row(j - 1) = 2 * (circles[0].center - circles[j].center).transpose();
    rhs[j - 1] = circles[0].center.squaredNorm() -
                 circles[j].center.squaredNorm() -
                 circles[0].radius * circles[0].radius +
                 circles[j].radius * circles[j].radius;
    slope[j - 1] = 2 * (circles[0].radius - circles[j].radius);
  }

  if (std::abs(lhs.determinant()) > 1e-12 * (1 + lhs.squaredNorm())) {
    const Eigen::PartialPivLU<Eigen::Matrix2d> lu(lhs);
    const Eigen::Vector2d base = lu.solve(rhs);
    const Eigen::Vector2d dir = lu.solve(slope);
    const Eigen::Vector2d w = base - circles[0].center;
    const double alpha = dir.squaredNorm() - 1;
    const double beta = 2 * (w.dot(dir) + circles[0].radius);
    const double gamma = w.squaredNorm() - circles[0].radius * circles[0].radius;

    std::vector<double> roots;
    if (std::abs(alpha) <= 1e-14 * (1 + dir.squaredNorm())) {
      // One tangent circle; the second solution degenerated into a line.
      if (beta != 0) roots.push_back(-gamma / beta);
    } else if (const double disc = beta * beta - 4 * alpha * gamma;
               disc >= 0) {
      const double q = -(beta + std::copysign(std::sqrt(disc), beta)) / 2;
      if (q != 0) {
        roots.push_back(q / alpha);
        roots.push_back(gamma / q);
      } else {
        roots.push_back(0);
      }
    }

    out.newton_converged = true;
    for (const double r : roots) {
      Eigen::Vector3d zr;
      zr << base + r * dir, r;
      if (const auto refined = polish(zr))
        push(*refined);
      else
        out.newton_converged = false;
    }
    return out;
  }

  // Collinear centers leave the difference system rank deficient: fall back
  // to Newton from a ring of seeds.
  Eigen::Vector2d hub = Eigen::Vector2d::Zero();
  for (const auto& c : circles) hub += c.center / 3.0;
  out.newton_converged = false;
  for (int seed = 0; seed < 16; ++seed) {
    const double th = 2 * std::numbers::pi * seed / 16;
    for (const double r0 : {0.5 * spread, -0.5 * spread, 2 * spread, -2 * spread}) {
      Eigen::Vector3d zr;
      zr << hub.x() + 2 * spread * std::cos(th), hub.y() + 2 * spread * std::sin(th), r0;
      if (const auto refined = polish(zr)) {
        out.newton_converged = true;
        push(*refined);
      }
    }
  }
  return out;
}

Circle ConeFamily::member(double t) const {
  if (sin_half_angle == 0) return {apex + t * axis, radius};
  return {apex + t * axis, t * sin_half_angle};
}

ConeFamily cone_from_members(const Circle& a, const Circle& b) {
  ConeFamily fam;
  const Eigen::VectorXd span = b.center - a.center;
  const double len = span.norm();
  if (len < 1e-12)
    throw std::invalid_argument("cone_from_members: coincident centers");
  fam.axis = span / len;
  const double slope = (b.radius - a.radius) / len;
  if (std::abs(slope) < 1e-12) {
    fam.apex = a.center;
    fam.sin_half_angle = 0;
    fam.radius = a.radius;
  } else {
    fam.apex = a.center - (a.radius / slope) * fam.axis;
    fam.sin_half_angle = slope;
  }
  return fam;
}

namespace {

double pair_value(const ConeFamily& fx, const ConeFamily& fy, double t1,
                  double t2) {
  return tangent_length_oracle(fx.member(t1), fy.member(t2));
}

// Golden-section line search of f over [lo, hi].
template <typename F>
double golden_min(F f, double lo, double hi, double* arg) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-10 * (1 + std::abs(a) + std::abs(b))) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  if (arg) *arg = (a + b) / 2;
  return f((a + b) / 2);
}

}  // namespace

double cone_min_tangent_oracle(const ConeFamily& fx, const ConeFamily& fy,
                               double t_range) {
  // Coarse grid: every sampled pair must admit a tangent length, otherwise
  // the minimum is not defined at all.
  const int grid = 81;
  double best = std::numeric_limits<double>::infinity();
  double bt1 = 0, bt2 = 0;
  for (int i = 0; i < grid; ++i) {
    const double t1 = -t_range + 2 * t_range * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double t2 = -t_range + 2 * t_range * j / (grid - 1);
      double v;
      try {
        v = pair_value(fx, fy, t1, t2);
      } catch (const NoCommonTangent&) {
        throw NoDistance();
      }
      if (v < best) { best = v; bt1 = t1; bt2 = t2; }
    }
  }

  // The squared tangent length is a quadratic polynomial in (t1, t2), so a
  // five-point stencil around the grid winner recovers its gradient and
  // Hessian exactly and the minimiser is one linear solve away.
  const double cell = 2 * t_range / (grid - 1);
  try {
    const auto sq = [&](double u1, double u2) {
      const double v = pair_value(fx, fy, u1, u2);
      return v * v;
    };
    double u1 = bt1, u2 = bt2;
    for (int round = 0; round < 3; ++round) {
      const double f00 = sq(u1, u2);
      const double fp0 = sq(u1 + cell, u2), fm0 = sq(u1 - cell, u2);
      const double f0p = sq(u1, u2 + cell), f0m = sq(u1, u2 - cell);
      const double fpp = sq(u1 + cell, u2 + cell);
      Eigen::Matrix2d hess;
      hess(0, 0) = (fp0 - 2 * f00 + fm0) / (cell * cell);
      hess(1, 1) = (f0p - 2 * f00 + f0m) / (cell * cell);
      hess(0, 1) = hess(1, 0) = (fpp - fp0 - f0p + f00) / (cell * cell);
      // Flat or indefinite directions (parallel axes): leave the jump to
      // the golden-section refinement below.
      if (!(hess(0, 0) > 0 && hess.determinant() > 1e-9 * hess.squaredNorm()))
        break;
      const Eigen::Vector2d grad((fp0 - fm0) / (2 * cell),
                                 (f0p - f0m) / (2 * cell));
      const Eigen::Vector2d step = hess.ldlt().solve(grad);
      u1 -= step[0];
      u2 -= step[1];
      if (step.norm() <= 1e-10 * (1 + std::abs(u1) + std::abs(u2)))
        return pair_value(fx, fy, u1, u2);
    }
  } catch (const NoCommonTangent&) {
  }

  // Alternating golden-section refinement around the grid winner.
  double t1 = bt1, t2 = bt2;
  for (int round = 0; round < 40; ++round) {
    const double prev = best;
    best = golden_min([&](double u) { return pair_value(fx, fy, u, t2); },
                      t1 - 2 * cell, t1 + 2 * cell, &t1);
    best = golden_min([&](double u) { return pair_value(fx, fy, t1, u); },
                      t2 - 2 * cell, t2 + 2 * cell, &t2);
    if (std::abs(prev - best) < 1e-12 * (1 + best)) break;
  }
  return best;
}

}  // namespace euclid
