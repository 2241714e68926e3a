// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <map>

#include "xcsbm/graphops.hpp"
#include "xcsbm/kernels.hpp"
#include "xcsbm/rng.hpp"

using namespace xcsbm;

namespace {

std::vector<std::uint8_t> labels(std::size_t n) {
  std::vector<std::uint8_t> eps(n);
  for (std::size_t i = 0; i < n; ++i) eps[i] = i % 2;
  return eps;
}

const Graph& graph(std::size_t n) {
  static std::map<std::size_t, Graph> cache;
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, sample_sbm(n, 0.2, 0.05, labels(n), 7, Backend::serial)).first;
  return it->second;
}

template <Backend B>
void BM_spmm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ConvOperator op = normalize(graph(n));
  const Matrix x = Matrix::Random(static_cast<Eigen::Index>(n), 16);
  Matrix out;
  for (auto _ : state) {
    if constexpr (B == Backend::serial)
      kernels::serial::spmm(op.matrix(), x, out);
    else
      kernels::omp::spmm(op.matrix(), x, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <Backend B>
void BM_sbm_rows(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto eps = labels(n);
  for (auto _ : state) {
    auto rows = B == Backend::serial ? kernels::serial::sbm_upper_rows(eps, 0.2, 0.05, 3)
                                     : kernels::omp::sbm_upper_rows(eps, 0.2, 0.05, 3);
    benchmark::DoNotOptimize(rows.data());
  }
}

template <Backend B>
void BM_row_power(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const ConvOperator op = normalize(graph(n));
  std::vector<std::uint32_t> nodes(64);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<std::uint32_t>(i);
  for (auto _ : state) {
    auto v = B == Backend::serial ? kernels::serial::row_power_sq_norms(op.matrix(), nodes, 2)
                                  : kernels::omp::row_power_sq_norms(op.matrix(), nodes, 2);
    benchmark::DoNotOptimize(v.data());
  }
}

template <Backend B>
void BM_pair_counts(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const BitRows bits = BitRows::from_csr(graph(n).csr());
  Engine eng = make_engine(5);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs(100000);
  for (auto& [a, b] : pairs) {
    a = static_cast<std::uint32_t>(eng() % n);
    b = static_cast<std::uint32_t>(eng() % n);
  }
  for (auto _ : state) {
    auto v = B == Backend::serial ? kernels::serial::pair_common_counts(bits, pairs)
                                  : kernels::omp::pair_common_counts(bits, pairs);
    benchmark::DoNotOptimize(v.data());
  }
}

}  // namespace

BENCHMARK(BM_spmm<Backend::serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_spmm<Backend::omp>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_sbm_rows<Backend::serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_sbm_rows<Backend::omp>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_row_power<Backend::serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_row_power<Backend::omp>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_pair_counts<Backend::serial>)->Arg(1000)->Arg(4000);
BENCHMARK(BM_pair_counts<Backend::omp>)->Arg(1000)->Arg(4000);

BENCHMARK_MAIN();
