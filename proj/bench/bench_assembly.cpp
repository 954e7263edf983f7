#include "pdfem/analysis.hpp"
#include "pdfem/assembly.hpp"
#include "pdfem/scenarios.hpp"

#include <benchmark/benchmark.h>
#include <omp.h>

#include <array>

using namespace pdfem;

namespace {

// Models are built once per scenario; only the stiffness assembly is timed.
const Model& plate_model() {
  static const Model m(infinite_plate().problem);
  return m;
}

// Uniform 60 x 60 plate with a centre crack, every element PD.
const Model& full_pd_model() {
  static const Model m = [] {
    Problem p;
    const std::array<int, 2> div{60, 60};
    p.mesh = generate_structured_grid(Vec3(0, 0, 0), Vec3(1, 1, 0), div, 0.01);
    p.crack = CrackPath::polyline({Vec3(0.3, 0.505, 0), Vec3(0.7, 0.505, 0)});
    p.material.E = 70e9;
    p.material.nu = 0.33;
    p.num.full_pd = true;
    return Model(std::move(p));
  }();
  return m;
}

const Model& block_model() {
  static const Model m(block3d().problem);
  return m;
}

void report(benchmark::State& state, const Model& m, const CsrMatrix& K) {
  state.counters["nnz"] = static_cast<double>(K.nnz());
  state.counters["pd_nodes"] = static_cast<double>(m.families().size());
}

template <const Model& (*Get)()>
void BM_Reference(benchmark::State& state) {
  const Model& m = Get();
  CsrMatrix K;
  for (auto _ : state) {
    K = assemble_reference(m.assembly_input());
    benchmark::DoNotOptimize(K);
  }
  report(state, m, K);
}

template <const Model& (*Get)()>
void BM_Parallel(benchmark::State& state) {
  const Model& m = Get();
  omp_set_num_threads(static_cast<int>(state.range(0)));
  CsrMatrix K;
  for (auto _ : state) {
    K = assemble_global(m.assembly_input());
    benchmark::DoNotOptimize(K);
  }
  report(state, m, K);
}

}  // namespace

BENCHMARK(BM_Reference<plate_model>)->Name("reference/infinite_plate")->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel<plate_model>)->Name("openmp/infinite_plate")->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reference<full_pd_model>)->Name("reference/full_pd_grid")->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel<full_pd_model>)->Name("openmp/full_pd_grid")->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reference<block_model>)->Name("reference/block3d")->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel<block_model>)->Name("openmp/block3d")->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
