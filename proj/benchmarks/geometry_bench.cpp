#include <benchmark/benchmark.h>

#include "vsw/cartan.hpp"
#include "vsw/frame.hpp"
#include "vsw/holonomy.hpp"
#include "vsw/walker.hpp"

using namespace vsw;

namespace {

WalkerSpec spec(const char* file) { return load_spec(std::string(VSW_SPECS_DIR) + "/" + file); }

}  // namespace

static void BM_Expand(benchmark::State& state) {
  Context ctx;
  ctx.declare_function("f", {u, U});
  Expr x = parse("u + U^2 + f(u,U) - 1/3*u*U", ctx);
  for (auto _ : state) benchmark::DoNotOptimize(pow(x, static_cast<long>(state.range(0))));
}
BENCHMARK(BM_Expand)->Arg(2)->Arg(4)->Arg(8);

static void BM_Differentiate(benchmark::State& state) {
  Context ctx;
  ctx.declare_function("f", {u, U});
  Expr x = parse("exp(u*U)*f(u,U)^3/(1 + u^2)", ctx);
  for (auto _ : state) benchmark::DoNotOptimize(diff(x, u, 2));
}
BENCHMARK(BM_Differentiate);

static void BM_Geometry(benchmark::State& state, const char* file) {
  WalkerSpec s = spec(file);
  for (auto _ : state) benchmark::DoNotOptimize(Geometry::compute(s.metric()));
}
BENCHMARK_CAPTURE(BM_Geometry, example1, "example1.wspec")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Geometry, example2, "example2.wspec")->Unit(benchmark::kMillisecond);

static void BM_SpinCoefficients(benchmark::State& state) {
  WalkerSpec s = spec("example2.wspec");
  Geometry geo = s.geometry();
  Tetrad t = calibrated_tetrad(s);
  for (auto _ : state) benchmark::DoNotOptimize(spin_coefficients(t, geo));
}
BENCHMARK(BM_SpinCoefficients)->Unit(benchmark::kMillisecond);

static void BM_Holonomy(benchmark::State& state) {
  WalkerSpec s = spec("example2.wspec");
  for (auto _ : state) benchmark::DoNotOptimize(holonomy(s));
}
BENCHMARK(BM_Holonomy)->Unit(benchmark::kMillisecond);

static void BM_CartanSubcase(benchmark::State& state) {
  WalkerSpec s = spec("example2-subcase.wspec");
  for (auto _ : state) benchmark::DoNotOptimize(run(s));
}
BENCHMARK(BM_CartanSubcase)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
