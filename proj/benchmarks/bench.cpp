#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "liecycles/cycles.hpp"
#include "liecycles/families.hpp"
#include "liecycles/form.hpp"
#include "liecycles/interplay.hpp"
#include "liecycles/subspaces.hpp"

using namespace lie;

namespace {

Vec random_sphere(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> pos(-4, 4), rad(0.2, 3);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c[i] = pos(rng);
  return encode(Sphere{c, rad(rng), rng() % 2 ? 1 : -1});
}

}  // namespace

static void LieProduct(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  const Vec x = random_sphere(rng, n), y = random_sphere(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(product(x, y));
}
BENCHMARK(LieProduct)->DenseRange(2, 10, 2);

static void EncodeDecode(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(2);
  const Vec x = random_sphere(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(decode(x));
}
BENCHMARK(EncodeDecode)->DenseRange(2, 10, 2);

static void PairInvariantBench(benchmark::State& state) {
  std::mt19937 rng(3);
  const Vec x = random_sphere(rng, 3), y = random_sphere(rng, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pair_invariant(x, y));
}
BENCHMARK(PairInvariantBench);

static void SubspaceProject(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(4);
  const Mat basis = columns({random_sphere(rng, n), random_sphere(rng, n)});
  const Vec y = random_sphere(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(project(basis, y));
}
BENCHMARK(SubspaceProject)->DenseRange(2, 10, 2);

static void QuadricProjection(benchmark::State& state) {
  std::mt19937 rng(5);
  const Vec x = random_sphere(rng, 3);
  const Vec s = vec_r(3);
  for (auto _ : state) benchmark::DoNotOptimize(quadric_projection_along(x, s));
}
BENCHMARK(QuadricProjection);

static void SubcycleGeometryBench(benchmark::State& state) {
  const Family f = make_family(
      std::vector<Cycle>{Sphere{Eigen::Vector3d(0.5, 0, 0), 1, 1},
                         Sphere{Eigen::Vector3d(-0.5, 0, 0), 1, 1}},
      Special::r());
  for (auto _ : state) benchmark::DoNotOptimize(subcycle_geometry(f));
}
BENCHMARK(SubcycleGeometryBench);

static void ProjectorEigenanalysis(benchmark::State& state) {
  const Family fx = make_family(
      std::vector<Cycle>{Sphere{Eigen::Vector3d(0.5, 0, 0), 1, 1},
                         Sphere{Eigen::Vector3d(-0.5, 0, 0), 1, 1}},
      Special::r());
  const Family fy = make_family(
      std::vector<Cycle>{Sphere{Eigen::Vector3d(0, 0.6, 0.2), 1.1, 1},
                         Sphere{Eigen::Vector3d(0, -0.4, 0.3), 0.9, 1}},
      Special::r());
  for (auto _ : state)
    benchmark::DoNotOptimize(projector_eigenanalysis(fx, fy));
}
BENCHMARK(ProjectorEigenanalysis);

static void Apollonius(benchmark::State& state) {
  const std::vector<Vec> inputs = {
      encode(Sphere{Eigen::Vector2d(0, 0), 1, 1}),
      encode(Sphere{Eigen::Vector2d(4, 0), 1, 1}),
      encode(Sphere{Eigen::Vector2d(2, 2 * std::sqrt(3.0)), 1, 1})};
  for (auto _ : state) benchmark::DoNotOptimize(apollonius(inputs));
}
BENCHMARK(Apollonius);

BENCHMARK_MAIN();
