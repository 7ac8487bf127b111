// Hot-path microbenchmarks: the eigensolver, norm kernels, tensor products,
// and lattice joins dominate every experiment, so regressions here show up
// directly in matrix sweep times.

#include "loclab/axioms.hpp"
#include "loclab/modelzoo.hpp"
#include "loclab/opkernel.hpp"

#include <benchmark/benchmark.h>

using namespace loclab;
using opkernel::Operator;

namespace {

Matrix seeded_hermitian(int n, std::uint64_t seed) {
  opkernel::Rng rng(seed);
  return rng.random_hermitian(n);
}

void bm_eig_hermitian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Operator a = Operator::make(seeded_hermitian(n, 11), opkernel::OpClass::hermitian);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opkernel::eig_hermitian(a));
  }
}
BENCHMARK(bm_eig_hermitian)->Arg(64)->Arg(128)->Arg(256);

void bm_commutator_norm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Operator a = Operator::make(seeded_hermitian(n, 3), opkernel::OpClass::hermitian);
  Operator b = Operator::make(seeded_hermitian(n, 4), opkernel::OpClass::hermitian);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opkernel::commutator_norm(a, b));
  }
}
BENCHMARK(bm_commutator_norm)->Arg(64)->Arg(256);

void bm_tensor_product(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Operator a = Operator::make(seeded_hermitian(n, 5), opkernel::OpClass::hermitian);
  Operator b = Operator::make(seeded_hermitian(n, 6), opkernel::OpClass::hermitian);
  for (auto _ : state) {
    benchmark::DoNotOptimize(opkernel::tensor_product(a, b));
  }
}
BENCHMARK(bm_tensor_product)->Arg(8)->Arg(16);

void bm_lattice_join(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  opkernel::Rng rng(21);
  std::vector<Operator> ops;
  for (int i = 0; i < 8; ++i) ops.push_back(rng.random_projection(n, n / 8));
  for (auto _ : state) {
    benchmark::DoNotOptimize(opkernel::lattice_join(ops));
  }
}
BENCHMARK(bm_lattice_join)->Arg(64)->Arg(128);

void bm_evolution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  spacetime::SpaceModel m =
      spacetime::make_model(spacetime::ModelKind::line_distinguished_frame, n, 1.0);
  zoo::LocalizationSystem sys = zoo::build_standard(m, zoo::Dispersion::relativistic);
  double t = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(zoo::evolution(sys, t));
    t += 0.1;
  }
}
BENCHMARK(bm_evolution)->Arg(64)->Arg(256);

void bm_condition_matrix_statics(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  spacetime::SpaceModel m =
      spacetime::make_model(spacetime::ModelKind::line_distinguished_frame, n, 1.0);
  zoo::LocalizationSystem sys = zoo::build_standard(m, zoo::Dispersion::zero);
  axioms::TolerancePolicy p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(axioms::check_statics(sys, p));
  }
}
BENCHMARK(bm_condition_matrix_statics)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
