#include "ndl/ndl.hpp"

#include <algorithm>
#include <cmath>

#include "ndl/patches.hpp"

namespace ndl {

namespace {

void check_params(const NdlParams& p) {
  if (p.k < 2) throw parameter_error("learn: k must be >= 2");
  if (p.r < 1) throw parameter_error("learn: r must be >= 1");
  if (p.T < 1) throw parameter_error("learn: T must be >= 1");
  if (p.N < 1) throw parameter_error("learn: N must be >= 1");
  if (p.lambda < 0.0) throw parameter_error("learn: lambda must be >= 0");
  if (p.max_rejections < 1) throw parameter_error("learn: max_rejections must be >= 1");
}

/// The learning loop needs injective walks to exist; probe with a dedicated
/// rejection budget before paying for the full run.
void probe_injective(const Network& g, int k, Rng rng) {
  Homomorphism x = rejection_init(g, k, rng);
  if (x.injective()) return;
  WalkTable table = make_walk_table(g, k);
  SamplerConfig cfg;
  cfg.mode = McmcMode::Glauber;
  cfg.injective = true;
  cfg.max_rejections = 100'000;
  try {
    injective_step(g, table, x, cfg, rng);
  } catch (const mixing_error&) {
    throw structure_error("no injective chain of length k found; k may exceed the graph");
  }
}

}  // namespace

LearnResult learn_dictionary(const Network& g, const NdlParams& params) {
  check_params(params);
  Rng root(params.seed, 0x6e646c);
  probe_injective(g, params.k, root.split(0));

  Rng init_rng = root.split(1);
  LearnResult res;
  res.dictionary.k = params.k;
  res.dictionary.r = params.r;
  res.dictionary = random_dictionary(params.k, params.r, init_rng);

  SamplerConfig cfg;
  cfg.mode = params.mode;
  cfg.injective = true;
  cfg.max_rejections = params.max_rejections;
  MotifSampler sampler(g, params.k, cfg, root.split(2));

  int d = params.k * params.k;
  Mat x(d, params.N);
  res.trace.reserve(params.T);
  for (int t = 1; t <= params.T; ++t) {
    long rejections_before = sampler.total_rejections();
    for (int s = 0; s < params.N; ++s) {
      const Homomorphism& h = sampler.step();
      Mat patch = extract_patch(g, h);
      std::copy(patch.a.begin(), patch.a.end(), x.col(s));
    }
    OnmfStep step = onmf_step(res.aggregates, res.dictionary.w, x, params.lambda,
                              params.code_iters, params.code_tol, params.dict_sweeps);
    LearnDiag diag;
    diag.t = t;
    diag.fit_rel = step.fit_rel;
    diag.rejections = sampler.total_rejections() - rejections_before;
    res.trace.push_back(diag);
  }
  return res;
}

DominanceScores dominance_scores(const AggregateState& agg) {
  if (agg.t < 1) throw parameter_error("dominance_scores: aggregates are empty");
  DominanceScores out;
  int r = agg.p.rows;
  out.scores.resize(r);
  for (int i = 0; i < r; ++i) out.scores[i] = std::sqrt(std::max(0.0, agg.p(i, i)));
  out.order.resize(r);
  for (int i = 0; i < r; ++i) out.order[i] = i;
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    return out.scores[a] > out.scores[b];
  });
  return out;
}

}  // namespace ndl
