#pragma once

#include <cmath>
#include <random>

#include "liecycles/cycles.hpp"
#include "liecycles/errors.hpp"
#include "liecycles/form.hpp"

namespace th {

using lie::Mat;
using lie::Vec;

inline Eigen::VectorXd rand_vec(std::mt19937& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

inline lie::Sphere rand_sphere(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> rad(0.2, 3.0);
  std::bernoulli_distribution flip(0.5);
  return {rand_vec(rng, n, -4, 4), rad(rng), flip(rng) ? 1 : -1};
}

inline lie::Point rand_point(std::mt19937& rng, int n) {
  return {rand_vec(rng, n, -4, 4)};
}

inline lie::Plane rand_plane(std::mt19937& rng, int n) {
  Eigen::VectorXd nrm;
  do {
    nrm = rand_vec(rng, n, -1, 1);
  } while (nrm.norm() < 0.3);
  nrm.normalize();
  std::uniform_real_distribution<double> sup(-4, 4);
  return {nrm, sup(rng)};
}

inline Vec rand_ambient(std::mt19937& rng, int n) {
  return rand_vec(rng, n + 3, -2, 2);
}

// k independent directions whose Gram is comfortably nondegenerate.
inline Mat rand_subspace(std::mt19937& rng, int n, int k) {
  for (;;) {
    Mat m(n + 3, k);
    for (int j = 0; j < k; ++j) m.col(j) = rand_ambient(rng, n);
    try {
      if (std::abs(lie::gram_det_normalized(m)) > 1e-3) return m;
    } catch (const lie::Error&) {
    }
  }
}

inline bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline double rel_gap(double a, double b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace th
