// Acceptance gate: end-to-end checks of the library's quantitative claims.
// Each check prints one PASS/FAIL line with its measured values and wall time;
// the process exits nonzero when any gating check fails.
#include <ndl/denoise.hpp>
#include <ndl/ndl.hpp>
#include <ndl/ndr.hpp>
#include <ndl/patches.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

using namespace ndl;

namespace {

int g_failed = 0;

class Timer {
public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

void report(int idx, bool ok, bool gating, double secs, double limit, const std::string& detail) {
  bool on_time = secs <= limit;
  if (!(ok && on_time) && gating) ++g_failed;
  std::printf("[%2d] %s  %s  [%.1f s %s %.0f s]\n", idx, ok && on_time ? "PASS" : "FAIL",
              detail.c_str(), secs, on_time ? "<=" : "OVER", limit);
  std::fflush(stdout);
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

Network cycle(int n) {
  Network g(n);
  for (int i = 0; i < n; ++i) g.set_weight(i, (i + 1) % n, 1.0);
  return g;
}

Network complete(int n) {
  Network g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_weight(u, v, 1.0);
  return g;
}

Network bowtie() {
  Network g(5);
  g.set_weight(0, 1, 1.0);
  g.set_weight(0, 2, 1.0);
  g.set_weight(1, 2, 1.0);
  g.set_weight(2, 3, 1.0);
  g.set_weight(2, 4, 1.0);
  g.set_weight(3, 4, 1.0);
  return g;
}

Dictionary chain_dictionary(int k) {
  Dictionary d;
  d.k = k;
  d.r = 1;
  Mat mask = on_chain_mask(k);
  double norm = std::sqrt(2.0 * (k - 1));
  d.w = Mat(k * k, 1);
  for (std::size_t i = 0; i < mask.a.size(); ++i) d.w.a[i] = mask.a[i] / norm;
  return d;
}

const char* mode_name(McmcMode m) {
  switch (m) {
    case McmcMode::PivotExact: return "pivot";
    case McmcMode::PivotApprox: return "pivotapprox";
    case McmcMode::Glauber: return "glauber";
  }
  return "?";
}

// --- check 1: chain occupation measures against the enumerated laws ---------

void check_stationarity() {
  Timer timer;
  struct Inst { const char* name; Network g; };
  std::vector<Inst> graphs;
  graphs.push_back({"K4", complete(4)});
  graphs.push_back({"C5", cycle(5)});
  graphs.push_back({"bowtie", bowtie()});
  const McmcMode modes[] = {McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber};

  double worst = 0.0;
  std::string worst_at = "-";
  int runs = 0;
  std::uint64_t seed = 1000;
  for (const auto& inst : graphs)
    for (int k : {2, 3})
      for (McmcMode mode : modes)
        for (bool injective : {false, true}) {
          ChainDiag d = chain_diagnostic(inst.g, k, mode, injective, 1'000'000, seed++);
          ++runs;
          if (d.tv > worst) {
            worst = d.tv;
            worst_at = fmt("%s%s k=%d on %s", mode_name(mode), injective ? " inj" : "", k,
                           inst.name);
          }
        }
  bool ok = worst <= 0.02;
  report(1, ok, true, timer.seconds(), 60,
         fmt("chain stationarity: worst TV %.4f (%s) over %d runs of 1e6 steps, limit 0.02",
             worst, worst_at.c_str(), runs));
}

// --- check 2: injective enumeration covers every node of C10 at k=3 ---------

void check_injective_coverage() {
  Timer timer;
  auto homs = enumerate_homomorphisms(cycle(10), 3, true);
  std::set<int> covered;
  for (const auto& h : homs)
    for (int v : h.nodes) covered.insert(v);
  bool ok = covered.size() == 10;
  report(2, ok, true, timer.seconds(), 1,
         fmt("injective coverage: %zu of 10 nodes appear across %zu injective 3-chains of C10",
             covered.size(), homs.size()));
}

// --- check 3: planted recovery from an identical-patch stream ---------------

void check_planted_recovery() {
  Timer timer;
  Network g = cycle(50);
  const int k = 6, n_cols = 20;
  Rng root(2024, 0);
  Dictionary dict = random_dictionary(k, 1, root);
  SamplerConfig cfg;
  cfg.injective = true;
  MotifSampler sampler(g, k, cfg, root.split(1));

  AggregateState agg;
  Mat x(k * k, n_cols);
  bool monotone = true;
  int reached_at = -1;
  double fit = 1.0;
  for (int t = 1; t <= 200; ++t) {
    for (int s = 0; s < n_cols; ++s) {
      Mat patch = extract_patch(g, sampler.step());
      std::copy(patch.a.begin(), patch.a.end(), x.col(s));
    }
    Mat w_prev = dict.w;
    OnmfStep step = onmf_step(agg, dict.w, x, 0.0);
    if (surrogate_objective(dict.w, agg.p, agg.q) >
        surrogate_objective(w_prev, agg.p, agg.q) + 1e-12)
      monotone = false;
    fit = step.fit_rel;
    if (fit <= 1e-3) {
      reached_at = t;
      break;
    }
  }
  bool ok = reached_at > 0 && monotone;
  report(3, ok, true, timer.seconds(), 10,
         fmt("planted recovery: fit %.2e %s (round %d of <= 200), surrogate %s",
             fit, reached_at > 0 ? "reached 1e-3" : "missed 1e-3", reached_at,
             monotone ? "non-increasing" : "INCREASED"));
}

// --- check 4: coding matches an active-set oracle on tiny instances ---------

/// Best nonnegative-lasso objective for a 1-column x over r=2 atoms by trying
/// every support and solving its stationarity system in closed form.
double oracle_objective(const Mat& x, const Mat& w, double lambda) {
  auto dot = [](const double* a, const double* b, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  };
  int d = w.rows;
  double a = dot(w.col(0), w.col(0), d);
  double b = dot(w.col(0), w.col(1), d);
  double c = dot(w.col(1), w.col(1), d);
  double d0 = dot(w.col(0), x.col(0), d) - 0.5 * lambda;
  double d1 = dot(w.col(1), x.col(0), d) - 0.5 * lambda;

  std::vector<Mat> candidates;
  candidates.emplace_back(2, 1);  // empty support
  if (a > 0.0) {
    Mat h(2, 1);
    h(0, 0) = std::max(0.0, d0 / a);
    candidates.push_back(h);
  }
  if (c > 0.0) {
    Mat h(2, 1);
    h(1, 0) = std::max(0.0, d1 / c);
    candidates.push_back(h);
  }
  double det = a * c - b * b;
  if (std::abs(det) > 1e-12) {
    double h0 = (c * d0 - b * d1) / det;
    double h1 = (a * d1 - b * d0) / det;
    if (h0 >= 0.0 && h1 >= 0.0) {
      Mat h(2, 1);
      h(0, 0) = h0;
      h(1, 0) = h1;
      candidates.push_back(h);
    }
  }
  double best = coding_objective(x, w, candidates.front(), lambda);
  for (const Mat& h : candidates) best = std::min(best, coding_objective(x, w, h, lambda));
  return best;
}

void check_coding_oracle() {
  Timer timer;
  Rng rng(77, 0);
  double worst_gap = -1e300;
  for (int i = 0; i < 100; ++i) {
    double lambda = (i % 2) * 0.5;
    Mat w(4, 2), x(4, 3);
    for (double& v : w.a) v = rng.uniform01();
    for (double& v : x.a) v = rng.uniform01();
    Mat h = sparse_code(x, w, lambda, 50000, 1e-14);
    for (int j = 0; j < 3; ++j) {
      Mat xj(4, 1), hj(2, 1);
      for (int row = 0; row < 4; ++row) xj(row, 0) = x(row, j);
      hj(0, 0) = h(0, j);
      hj(1, 0) = h(1, j);
      double gap = coding_objective(xj, w, hj, lambda) - oracle_objective(xj, w, lambda);
      worst_gap = std::max(worst_gap, gap);
    }
  }
  bool ok = worst_gap <= 1e-4;
  report(4, ok, true, timer.seconds(), 10,
         fmt("coding vs active-set oracle: worst objective gap %.2e over 300 columns, "
             "limit 1e-4", worst_gap));
}

// --- check 5: exact self-reconstruction of C30 ------------------------------

void check_self_reconstruction() {
  Timer timer;
  Network g = cycle(30);
  NdlParams lp;
  lp.k = 5;
  lp.r = 1;
  lp.T = 150;
  lp.N = 50;
  lp.lambda = 0.0;
  lp.seed = 31;
  Dictionary dict = learn_dictionary(g, lp).dictionary;

  NdrParams rp;
  rp.k = 5;
  rp.T = 20000;
  rp.lambda = 0.0;
  rp.seed = 32;
  ReconstructionResult res = reconstruct(g, dict, rp);
  JaccardMetrics m = jaccard_metrics(threshold(res.weights, 0.5), g);
  bool ok = m.index == 1.0;
  report(5, ok, true, timer.seconds(), 30,
         fmt("self-reconstruction: Jaccard %.6f on C30 (theta 0.5, %zu passes of %ld steps), "
             "need exactly 1", m.index, res.passes.size(), res.steps_per_pass));
}

// --- check 6: reconstruction bound certified exactly on random graphs -------

void check_bound() {
  Timer timer;
  Rng rng(606, 0);
  int held = 0, exact = 0;
  double min_margin = 1e300;
  const McmcMode modes[] = {McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber};
  for (int i = 0; i < 20; ++i) {
    Network g;
    for (;;) {
      int n = 4 + static_cast<int>(rng.below(5));
      double p = 0.4 + 0.3 * rng.uniform01();
      g = generate(ModelSpec::er(n, p), rng.next());
      if (g.is_connected() && g.bipartite_classes().empty()) break;
    }
    Dictionary d = random_dictionary(3, 1 + static_cast<int>(i % 2), rng);
    NdrParams np;
    np.k = 3;
    np.lambda = (i % 3 == 0) ? 0.5 : 0.0;
    np.mode = modes[i % 3];
    BoundReport rep = bound_report(g, d, np);
    if (rep.holds) ++held;
    if (rep.exact) ++exact;
    min_margin = std::min(min_margin, rep.margin);
  }
  bool ok = held == 20 && exact == 20;
  report(6, ok, true, timer.seconds(), 60,
         fmt("reconstruction bound: held %d/20, enumerated exactly %d/20, min margin %.4f",
             held, exact, min_margin));
}

// --- check 7: patch error rate on sparse ER matches the closed form ---------

void check_er_error_rate() {
  Timer timer;
  const int k = 10;
  const double p = 0.05;
  Network g = generate(ModelSpec::er(300, p), 700);
  Dictionary d = chain_dictionary(k);
  NdrParams params;
  params.k = k;
  params.lambda = 0.0;
  params.seed = 701;
  MesoscaleError me = mesoscale_error(g, d, params, 20000);
  double measured = me.mean / (2.0 * (k - 1));
  double closed_form = (k - 2) * p / 2.0;   // off-chain pairs only
  double quoted = k * p / 2.0;              // the coarser k p / 2 approximation
  bool ok = std::abs(measured - closed_form) <= 0.15 * closed_form;
  report(7, ok, true, timer.seconds(), 60,
         fmt("ER patch error rate: measured %.4f vs closed form %.2f (+-15%%); "
             "coarse approximation %.2f", measured, closed_form, quoted));
}

// --- check 8: additive-noise detection with on-chain damping ----------------

void check_denoising_auc() {
  Timer timer;
  Network g0 = generate(ModelSpec::sbm({60, 60, 60},
                                       {{0.5, 0.02, 0.02}, {0.02, 0.5, 0.02}, {0.02, 0.02, 0.5}}),
                        800);
  CorruptionResult cr = corrupt(g0, NoiseSpec::additive_er(0.5), 801);

  NdlParams lp;
  lp.k = 6;
  lp.r = 4;
  lp.T = 100;
  lp.N = 50;
  lp.seed = 802;
  Dictionary dict = learn_dictionary(cr.graph, lp).dictionary;

  auto labeled = label_candidates(candidates_additive(cr.graph), cr.changed,
                                  NoiseSpec::Kind::AdditiveER);
  double auc[2];
  for (int pass = 0; pass < 2; ++pass) {
    NdrParams rp;
    rp.k = 6;
    rp.T = 30000;
    rp.xi = pass == 0 ? 0.0 : 1.0;
    rp.seed = 803;
    ReconstructionResult res = reconstruct(cr.graph, dict, rp);
    std::vector<ScoredPair> scored = labeled;
    for (ScoredPair& sp : scored) sp.score = res.weights.weight(sp.u, sp.v);
    auc[pass] = roc_auc(scored).auc;
  }
  double pa_auc =
      roc_auc(baseline_scores(cr.graph, labeled, BaselineMethod::PreferentialAttachment)).auc;
  bool ok = auc[0] >= 0.70 && auc[0] >= auc[1] - 0.02;
  report(8, ok, true, timer.seconds(), 180,
         fmt("additive denoising: AUC %.3f at xi=0 (need >= 0.70), %.3f at xi=1, "
             "preferential attachment %.3f", auc[0], auc[1], pa_auc));
}

// --- check 9: baseline scores are exact on the textbook examples ------------

void check_baselines() {
  Timer timer;
  Network star(6);
  for (int leaf = 1; leaf <= 5; ++leaf) star.set_weight(0, leaf, 1.0);
  std::vector<ScoredPair> cand(2);
  cand[0].u = 0;
  cand[0].v = 1;
  cand[1].u = 1;
  cand[1].v = 2;
  auto pa = baseline_scores(star, cand, BaselineMethod::PreferentialAttachment);
  bool pa_ok = pa[0].score == 5.0 && pa[1].score == 1.0;

  Network path(3);
  path.set_weight(0, 1, 1.0);
  path.set_weight(1, 2, 1.0);
  std::vector<ScoredPair> aa_cand(1);
  aa_cand[0].u = 0;
  aa_cand[0].v = 2;
  double aa = baseline_scores(path, aa_cand, BaselineMethod::AdamicAdar)[0].score;
  bool aa_ok = std::abs(aa - 1.0 / std::log(2.0)) <= 1e-12;

  bool ok = pa_ok && aa_ok;
  report(9, ok, true, timer.seconds(), 1,
         fmt("baseline exactness: PA star scores %g/%g (need 5/1), AA path score %.12f "
             "(need 1/ln 2 = %.12f)", pa[0].score, pa[1].score, aa, 1.0 / std::log(2.0)));
}

// --- check 10 (optional): full-scale self-reconstruction --------------------

void check_full_data() {
  const char* path = std::getenv("NDL_CALTECH_EDGES");
  if (path == nullptr || *path == '\0') {
    std::printf("[10] SKIP  full-data self-reconstruction: NDL_CALTECH_EDGES not set "
                "(optional, never gates)\n");
    return;
  }
  Timer timer;
  try {
    Network g = load_edge_list(path);
    NdlParams lp;  // defaults: k=21, r=25, T=100, N=100, lambda=1, pivot-approx
    lp.seed = 900;
    Dictionary dict = learn_dictionary(g, lp).dictionary;
    NdrParams rp;
    rp.k = 21;
    rp.T = 0;  // floor(n ln n)
    rp.lambda = 0.0;
    rp.seed = 901;
    ReconstructionResult res = reconstruct(g, dict, rp);
    JaccardMetrics m = jaccard_metrics(threshold(res.weights, 0.4), g);
    bool ok = m.index >= 0.80;
    report(10, ok, false, timer.seconds(), 3600,
           fmt("full-data self-reconstruction: Jaccard %.4f at theta 0.4 on %d nodes "
               "(target >= 0.80, not gating)", m.index, g.node_count()));
  } catch (const std::exception& e) {
    std::printf("[10] SKIP  full-data self-reconstruction: %s (optional, never gates)\n",
                e.what());
  }
}

}  // namespace

int main() {
  check_stationarity();
  check_injective_coverage();
  check_planted_recovery();
  check_coding_oracle();
  check_self_reconstruction();
  check_bound();
  check_er_error_rate();
  check_denoising_auc();
  check_baselines();
  check_full_data();
  std::printf("acceptance: %d of 9 gating checks failed\n", g_failed);
  return g_failed == 0 ? 0 : 1;
}
