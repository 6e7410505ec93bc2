// Serial reference against the OpenMP kernels on representative workloads.

#include <benchmark/benchmark.h>

#include "kzmodp/arith.hpp"
#include "kzmodp/cartier.hpp"
#include "kzmodp/kernels.hpp"
#include "kzmodp/kz.hpp"

using namespace kzmodp;

namespace {

FpPoly dense_sum(std::size_t nvars, std::uint64_t power, std::uint32_t p) {
  auto vars = z_vars(nvars);
  FpPoly s(vars, p);
  for (std::size_t i = 0; i < nvars; ++i) s += FpPoly::variable(vars, p, i);
  s += FpPoly::constant(vars, p, 1);
  return pow(s, power);
}

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_Mul(benchmark::State& st) {
  auto a = dense_sum(4, 12, 101);
  auto b = dense_sum(4, 10, 101);
  for (auto _ : st) benchmark::DoNotOptimize(mul(a, b, exec_of(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_Mul)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_ArithmeticVector(benchmark::State& st) {
  auto cfg = make_prime_config(11, 3, 7);
  ExponentVectorM M{std::vector<std::uint64_t>(cfg.n, cfg.mbar()), true};
  const std::uint64_t w = (static_cast<std::uint64_t>(cfg.a1()) * cfg.k - 1) * cfg.p + cfg.p - 1;
  for (auto _ : st) benchmark::DoNotOptimize(arithmetic_vector(M, w, cfg.p, exec_of(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_ArithmeticVector)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_CartierBlock(benchmark::State& st) {
  auto cfg = make_prime_config(13, 3, 7);
  auto curve = curve_X(cfg);
  for (auto _ : st) benchmark::DoNotOptimize(cartier_block(1, curve, cfg, exec_of(st)));
  st.SetLabel(st.range(0) ? "parallel" : "serial");
}
BENCHMARK(BM_CartierBlock)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
