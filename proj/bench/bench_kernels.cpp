// Serial reference vs OpenMP kernel, same inputs. Arg(0) = serial, Arg(1) = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "cpmean/connection.hpp"
#include "cpmean/opmeans.hpp"

using namespace cpmean;

namespace {

PsdMatrix random_pd(Index n, unsigned seed) {
  std::srand(seed);
  const Matrix g = Matrix::Random(n, n);
  return PsdMatrix::trusted(hermitian_part(g * g.adjoint() + 0.1 * Matrix::Identity(n, n)));
}

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void BM_log_mean(benchmark::State& state) {
  const Index n = state.range(1);
  const PsdMatrix a = random_pd(n, 1), b = random_pd(n, 2);
  MeanOptions opts;
  opts.log_nodes = 64;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(log_mean(a, b, opts));
}

void BM_connection_apply(benchmark::State& state) {
  const Index n = state.range(1);
  const PsdMatrix a = random_pd(n, 3), b = random_pd(n, 4);
  const ConnectionRep rep = power_rep(0.3, 64);
  const Exec exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(connection_apply(rep, a, b, exec));
}

void BM_batch_mean(benchmark::State& state) {
  const Index n = state.range(1);
  std::vector<PsdMatrix> as, bs;
  for (unsigned k = 0; k < 256; ++k) {
    as.push_back(random_pd(n, 10 + 2 * k));
    bs.push_back(random_pd(n, 11 + 2 * k));
  }
  MeanOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(batch_mean(MeanKind::geo(), as, bs, opts));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int exec : {0, 1})
    for (int n : {4, 9, 16}) b->Args({exec, n});
  b->ArgNames({"parallel", "n"})->Unit(benchmark::kMicrosecond);
}

}  // namespace

BENCHMARK(BM_log_mean)->Apply(sizes);
BENCHMARK(BM_connection_apply)->Apply(sizes);
BENCHMARK(BM_batch_mean)->Apply(sizes);

BENCHMARK_MAIN();
