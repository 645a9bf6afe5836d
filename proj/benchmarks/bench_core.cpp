#include <benchmark/benchmark.h>

#include <array>

#include "multigrid.hpp"
#include "pcurl/constraint.hpp"
#include "pcurl/diffops.hpp"
#include "pcurl/discretization.hpp"
#include "pcurl/meridian.hpp"
#include "pcurl/minimizer.hpp"
#include "pcurl/plap.hpp"
#include "pcurl/symmetry.hpp"

using namespace pcurl;

static void BM_SpectralCurl(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(static_cast<int>(st.range(0)), 8.0);
  const PeriodicDisc d(g);
  const Vec u = random_divfree_bump(g, 1).flat();
  Vec out;
  for (auto _ : st) {
    d.curl(u, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(g.size()));
}
BENCHMARK(BM_SpectralCurl)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_Fd2Curl(benchmark::State& st) {
  const VectorField3 u = random_divfree_bump(GridSpec::cube(static_cast<int>(st.range(0)), 8.0), 1);
  for (auto _ : st) benchmark::DoNotOptimize(curl(u, DiffMode::fd2));
}
BENCHMARK(BM_Fd2Curl)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_MultigridVcycle(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(static_cast<int>(st.range(0)), 8.0);
  std::array<Vec, 3> coef;
  for (int a = 0; a < 3; ++a) {
    coef[a].resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) coef[a][i] = 1.0 + static_cast<double>((i * 7919 + a) % 97);
  }
  const detail::PeriodicMultigrid mg(g, coef);
  Vec b(g.size(), 0.0), x;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = (i % 13) - 6.0;
  for (auto _ : st) {
    mg.vcycle(b, x);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_MultigridVcycle)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PeriodicWofV(benchmark::State& st) {
  const GridSpec g = GridSpec::cube(static_cast<int>(st.range(0)), 8.0);
  const PeriodicDisc d(g);
  const Exponents e(1.5);
  const Vec v = random_divfree_bump(g, 3).flat();
  for (auto _ : st) benchmark::DoNotOptimize(w_of_v(d, v, e, WvOptions{1e-8, 500, true}));
}
BENCHMARK(BM_PeriodicWofV)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_MeridianWofV(benchmark::State& st) {
  MeridianGridSpec mg;
  mg.nr = static_cast<int>(st.range(0));
  mg.nz = 2 * mg.nr;
  const MeridianDisc d(mg, MeridianClass::O);
  const Exponents e(1.5);
  const Vec v = random_meridian(mg, MeridianClass::O, 3).dofs;
  for (auto _ : st) benchmark::DoNotOptimize(w_of_v(d, v, e, WvOptions{1e-8, 500, true}));
}
BENCHMARK(BM_MeridianWofV)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_PlapMinimize(benchmark::State& st) {
  RadialGrid g;
  g.n = static_cast<int>(st.range(0));
  const Vec init = plap_gaussian(g);
  for (auto _ : st) benchmark::DoNotOptimize(plap_minimize(g, init, 2.0, PlapOptions{}));
}
BENCHMARK(BM_PlapMinimize)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
