// Microbenchmarks for the hot paths: chain updates, patch extraction,
// sparse coding, dictionary refresh, and reconstruction throughput.
#include <benchmark/benchmark.h>

#include <ndl/ndl.hpp>
#include <ndl/ndr.hpp>
#include <ndl/patches.hpp>

namespace {

using namespace ndl;

const Network& bench_graph() {
  static Network g = generate(ModelSpec::er(300, 0.05), 42);
  return g;
}

void chain_step(benchmark::State& state, McmcMode mode, bool injective) {
  SamplerConfig cfg;
  cfg.mode = mode;
  cfg.injective = injective;
  MotifSampler sampler(bench_graph(), static_cast<int>(state.range(0)), cfg, Rng(42, 1));
  for (auto _ : state) benchmark::DoNotOptimize(sampler.step().nodes.data());
  state.SetItemsProcessed(state.iterations());
}

void bm_pivot_exact(benchmark::State& s) { chain_step(s, McmcMode::PivotExact, false); }
void bm_pivot_approx(benchmark::State& s) { chain_step(s, McmcMode::PivotApprox, false); }
void bm_glauber(benchmark::State& s) { chain_step(s, McmcMode::Glauber, false); }
void bm_pivot_approx_inj(benchmark::State& s) { chain_step(s, McmcMode::PivotApprox, true); }

BENCHMARK(bm_pivot_exact)->Arg(5)->Arg(21);
BENCHMARK(bm_pivot_approx)->Arg(5)->Arg(21);
BENCHMARK(bm_glauber)->Arg(5)->Arg(21);
BENCHMARK(bm_pivot_approx_inj)->Arg(5)->Arg(21);

void bm_extract_patch(benchmark::State& state) {
  SamplerConfig cfg;
  cfg.injective = true;
  MotifSampler sampler(bench_graph(), static_cast<int>(state.range(0)), cfg, Rng(42, 2));
  for (auto _ : state) {
    Mat patch = extract_patch(bench_graph(), sampler.step());
    benchmark::DoNotOptimize(patch.a.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_extract_patch)->Arg(21);

// Reference coding scale: 441-dimensional patches, 25 motifs, 100 columns.
void bm_sparse_code(benchmark::State& state) {
  Rng rng(42, 3);
  Dictionary d = random_dictionary(21, 25, rng);
  Mat x(441, 100);
  for (double& v : x.a) v = rng.uniform01() < 0.1 ? 1.0 : 0.0;
  for (auto _ : state) {
    Mat h = sparse_code(x, d.w, 1.0);
    benchmark::DoNotOptimize(h.a.data());
  }
  state.SetItemsProcessed(state.iterations() * 100);  // columns coded
}
BENCHMARK(bm_sparse_code);

void bm_dictionary_update(benchmark::State& state) {
  Rng rng(42, 4);
  Dictionary d = random_dictionary(21, 25, rng);
  Mat h(25, 100), x(441, 100);
  for (double& v : h.a) v = rng.uniform01();
  for (double& v : x.a) v = rng.uniform01() < 0.1 ? 1.0 : 0.0;
  Mat p = matmul_tb(h, h);
  Mat q = matmul_tb(h, x);
  for (auto _ : state) {
    Mat w = dictionary_update(d.w, p, q);
    benchmark::DoNotOptimize(w.a.data());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_dictionary_update);

// One full online round: N walks, coding, aggregate fold, dictionary refresh.
void bm_onmf_round(benchmark::State& state) {
  Rng rng(42, 5);
  Dictionary d = random_dictionary(21, 25, rng);
  SamplerConfig cfg;
  cfg.injective = true;
  MotifSampler sampler(bench_graph(), 21, cfg, Rng(42, 6));
  AggregateState agg;
  Mat x(441, 100);
  for (auto _ : state) {
    for (int s = 0; s < 100; ++s) {
      Mat patch = extract_patch(bench_graph(), sampler.step());
      std::copy(patch.a.begin(), patch.a.end(), x.col(s));
    }
    OnmfStep step = onmf_step(agg, d.w, x, 1.0);
    benchmark::DoNotOptimize(step.fit_rel);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_onmf_round)->Unit(benchmark::kMillisecond);

void bm_reconstruct(benchmark::State& state) {
  Rng rng(42, 7);
  Dictionary d = random_dictionary(6, 4, rng);
  NdrParams params;
  params.k = 6;
  params.T = 1000;
  params.seed = 42;
  for (auto _ : state) {
    ReconstructionResult res = reconstruct(bench_graph(), d, params);
    benchmark::DoNotOptimize(res.weights.edge_count());
  }
  state.SetItemsProcessed(state.iterations() * 1000);  // reconstruction steps
  state.SetLabel("k=6 r=4");
}
BENCHMARK(bm_reconstruct)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
