#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ndl/denoise.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

using namespace ndl;

namespace {

Network path_graph(int n) {
  Network g(n);
  for (int i = 0; i + 1 < n; ++i) g.set_weight(i, i + 1, 1.0);
  return g;
}

Network star(int leaves) {
  Network g(leaves + 1);
  for (int leaf = 1; leaf <= leaves; ++leaf) g.set_weight(0, leaf, 1.0);
  return g;
}

Network complete(int n) {
  Network g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.set_weight(u, v, 1.0);
  return g;
}

ScoredPair scored(double score, bool positive) {
  ScoredPair sp;
  sp.score = score;
  sp.positive = positive;
  return sp;
}

}  // namespace

TEST_CASE("subtractive candidates are non-adjacent pairs within chain range") {
  Network g = path_graph(4);
  auto within2 = candidates_subtractive(g, 2);
  CHECK(within2 == std::vector<std::pair<int, int>>{{0, 2}, {1, 3}});
  auto within3 = candidates_subtractive(g, 3);
  CHECK(within3 == std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 3}});

  // Another component is out of reach unless every non-edge is requested.
  Network split(4);
  split.set_weight(0, 1, 1.0);
  split.set_weight(2, 3, 1.0);
  CHECK(candidates_subtractive(split, 3).empty());
  auto all = candidates_subtractive(split, 3, true);
  CHECK(all == std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 2}, {1, 3}});

  CHECK_THROWS_AS(candidates_subtractive(g, 0), parameter_error);
}

TEST_CASE("additive candidates are the observed edges minus self-loops") {
  Network g = path_graph(3);
  g.set_weight(1, 1, 2.0);
  auto cand = candidates_additive(g);
  CHECK(cand == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("labels encode which side of the corruption a candidate sits on") {
  std::vector<std::pair<int, int>> cand = {{0, 2}, {1, 3}};
  std::vector<ChangedPair> changed = {{0, 2, PairLabel::true_edge}};

  auto sub = label_candidates(cand, changed, NoiseSpec::Kind::SubtractiveER);
  REQUIRE(sub.size() == 2);
  CHECK(sub[0].u == 0);
  CHECK(sub[0].v == 2);
  CHECK(sub[0].positive);  // a removed true edge is the thing to recover
  CHECK_FALSE(sub[1].positive);

  // In an additive run the changed pairs are the fakes: survivors are positive.
  std::vector<ChangedPair> added = {{1, 3, PairLabel::false_edge}};
  auto add = label_candidates(cand, added, NoiseSpec::Kind::AdditiveER);
  CHECK(add[0].positive);
  CHECK_FALSE(add[1].positive);
  auto ws = label_candidates(cand, added, NoiseSpec::Kind::AdditiveWS);
  CHECK(ws[0].positive);
  CHECK_FALSE(ws[1].positive);
}

TEST_CASE("neighborhood baselines match hand-computed scores") {
  std::vector<ScoredPair> pa_cand(2);
  pa_cand[0].u = 0;
  pa_cand[0].v = 1;
  pa_cand[1].u = 1;
  pa_cand[1].v = 2;
  auto pa = baseline_scores(star(5), pa_cand, BaselineMethod::PreferentialAttachment);
  CHECK(pa[0].score == 5.0);  // hub degree 5 times leaf degree 1
  CHECK(pa[1].score == 1.0);

  std::vector<ScoredPair> aa_cand(1);
  aa_cand[0].u = 0;
  aa_cand[0].v = 2;
  auto aa = baseline_scores(path_graph(3), aa_cand, BaselineMethod::AdamicAdar);
  CHECK(aa[0].score == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));

  std::vector<ScoredPair> jc_cand(1);
  jc_cand[0].u = 0;
  jc_cand[0].v = 1;
  auto jc = baseline_scores(complete(4), jc_cand, BaselineMethod::JaccardIndex);
  CHECK(jc[0].score == 0.5);  // shares 2 of 4 distinct neighbors

  // Labels and identities ride through untouched.
  std::vector<ScoredPair> tagged(1);
  tagged[0].u = 1;
  tagged[0].v = 3;
  tagged[0].positive = true;
  auto out = baseline_scores(star(5), tagged, BaselineMethod::JaccardIndex);
  CHECK(out[0].u == 1);
  CHECK(out[0].v == 3);
  CHECK(out[0].positive);
  CHECK(out[0].score == 1.0);  // leaves share their lone neighbor

  Network selfed = path_graph(3);
  selfed.set_weight(1, 1, 1.0);
  CHECK_THROWS_AS(baseline_scores(selfed, aa_cand, BaselineMethod::AdamicAdar),
                  method_unavailable_error);
  CHECK_NOTHROW(baseline_scores(selfed, jc_cand, BaselineMethod::PreferentialAttachment));
}

TEST_CASE("ranking quality follows the Mann-Whitney statistic") {
  std::vector<ScoredPair> mixed = {scored(0.9, true), scored(0.4, true), scored(0.6, false),
                                   scored(0.1, false)};
  RocCurve roc = roc_auc(mixed);
  CHECK(roc.auc == doctest::Approx(0.75).epsilon(1e-14));

  std::vector<ScoredPair> tied = {scored(0.5, true), scored(0.5, false)};
  CHECK(roc_auc(tied).auc == doctest::Approx(0.5).epsilon(1e-14));

  std::vector<ScoredPair> perfect = {scored(1.0, true), scored(0.9, true), scored(0.1, false)};
  CHECK(roc_auc(perfect).auc == 1.0);
  std::vector<ScoredPair> inverted = {scored(0.1, true), scored(0.9, false)};
  CHECK(roc_auc(inverted).auc == 0.0);

  // Any strictly increasing rescoring leaves the ranks, hence the area, alone.
  std::vector<ScoredPair> exp_scored = mixed;
  for (auto& sp : exp_scored) sp.score = std::exp(sp.score);
  CHECK(roc_auc(exp_scored).auc == roc.auc);

  CHECK_THROWS_AS(roc_auc({scored(1.0, true)}), metric_error);
  CHECK_THROWS_AS(roc_auc({scored(1.0, true), scored(0.2, true)}), metric_error);

  REQUIRE(roc.points.size() >= 2);
  CHECK(roc.points.front() == std::pair<double, double>{0.0, 0.0});
  CHECK(roc.points.back() == std::pair<double, double>{1.0, 1.0});
  for (std::size_t i = 1; i < roc.points.size(); ++i) {
    CHECK(roc.points[i].first >= roc.points[i - 1].first);
    CHECK(roc.points[i].second >= roc.points[i - 1].second);
  }
}

TEST_CASE("threshold selection separates a cleanly split candidate set") {
  std::vector<ScoredPair> clean;
  for (int i = 0; i < 50; ++i) clean.push_back(scored(1.0, true));
  for (int i = 0; i < 50; ++i) clean.push_back(scored(0.0, false));

  SplitEval ev = classify_with_split(clean, 7);
  CHECK(ev.accuracy == 1.0);
  CHECK(ev.precision == 1.0);
  CHECK(ev.recall == 1.0);
  CHECK(ev.theta >= 0.0);
  CHECK(ev.theta < 1.0);

  SplitEval again = classify_with_split(clean, 7);
  CHECK(ev.theta == again.theta);
  CHECK(ev.accuracy == again.accuracy);

  // All-positive candidates drive theta below every score.
  std::vector<ScoredPair> all_pos(12, scored(0.7, true));
  SplitEval pos_ev = classify_with_split(all_pos, 3);
  CHECK(pos_ev.theta == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(pos_ev.accuracy == 1.0);
  CHECK(pos_ev.recall == 1.0);

  CHECK_THROWS_AS(classify_with_split(clean, 1, 0.6, 0.5), parameter_error);
  CHECK_THROWS_AS(classify_with_split(clean, 1, 0.25, 0.0), parameter_error);
  CHECK_THROWS_AS(classify_with_split({scored(1, true), scored(0, false), scored(1, true)}, 1),
                  degenerate_error);
}

TEST_CASE("the denoising pipeline scores candidates by reconstructed weight") {
  Network g0 = generate(ModelSpec::ws(30, 4, 0.1), 5);
  CorruptionResult cr = corrupt(g0, NoiseSpec::subtractive_er(0.2), 6);

  NdlParams lp;
  lp.k = 3;
  lp.r = 2;
  lp.T = 20;
  lp.N = 15;
  lp.lambda = 0.0;
  lp.seed = 8;
  NdrParams rp;
  rp.k = 3;
  rp.T = 3000;
  rp.seed = 9;

  DenoiseResult res = denoise_pipeline(cr.graph, cr.changed, NoiseSpec::Kind::SubtractiveER,
                                       lp, rp);
  auto cand = candidates_subtractive(cr.graph, 3);
  REQUIRE(res.scores.size() == cand.size());
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < cand.size(); ++i) {
    CHECK(res.scores[i].u == cand[i].first);
    CHECK(res.scores[i].v == cand[i].second);
    CHECK(res.scores[i].score ==
          res.reconstruction.weights.weight(cand[i].first, cand[i].second));
    (res.scores[i].positive ? has_pos : has_neg) = true;
  }
  CHECK(has_pos);
  CHECK(has_neg);
  CHECK(res.dictionary.k == 3);
  CHECK(res.dictionary.r == 2);

  DenoiseResult rerun = denoise_pipeline(cr.graph, cr.changed, NoiseSpec::Kind::SubtractiveER,
                                         lp, rp);
  for (std::size_t i = 0; i < res.scores.size(); ++i)
    CHECK(res.scores[i].score == rerun.scores[i].score);

  // No changed pairs means no positive candidates: the run is degenerate.
  CHECK_THROWS_AS(denoise_pipeline(cr.graph, {}, NoiseSpec::Kind::SubtractiveER, lp, rp),
                  degenerate_error);
}

TEST_CASE("suppressing on-chain signal helps flag injected edges") {
  // Fake edges dropped into a two-block graph lack mesoscale support, so
  // coding without the on-chain shortcut separates them more cleanly.
  Network g0 = generate(ModelSpec::sbm({20, 20}, {{0.5, 0.05}, {0.05, 0.5}}), 12);
  CorruptionResult cr = corrupt(g0, NoiseSpec::additive_er(0.5), 13);

  NdlParams lp;
  lp.k = 4;
  lp.r = 2;
  lp.T = 30;
  lp.N = 20;
  lp.lambda = 0.0;
  lp.seed = 14;

  double auc[2];
  for (int pass = 0; pass < 2; ++pass) {
    NdrParams rp;
    rp.k = 4;
    rp.T = 10000;
    rp.seed = 15;
    rp.xi = pass == 0 ? 0.0 : 1.0;
    DenoiseResult res = denoise_pipeline(cr.graph, cr.changed, NoiseSpec::Kind::AdditiveER,
                                         lp, rp);
    auc[pass] = roc_auc(res.scores).auc;
  }
  CHECK(auc[0] >= 0.5);
  CHECK(auc[0] >= auc[1] - 0.02);
}
