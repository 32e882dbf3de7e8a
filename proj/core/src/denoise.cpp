#include "ndl/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <unordered_set>

namespace ndl {

namespace {

std::uint64_t pair_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

std::vector<std::pair<int, int>> candidates_subtractive(const Network& g_obs, int k,
                                                        bool all_nonedges) {
  if (k < 1) throw parameter_error("candidates_subtractive: k must be >= 1");
  int n = g_obs.node_count();
  std::vector<std::pair<int, int>> out;
  if (all_nonedges) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!g_obs.has_edge(u, v)) out.emplace_back(u, v);
    return out;
  }
  // Bounded BFS from each node; keep non-adjacent pairs within distance k.
  std::vector<int> dist(n);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      if (dist[u] >= k) continue;
      for (const auto& [v, wt] : g_obs.neighbors(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
    for (int v = s + 1; v < n; ++v)
      if (dist[v] > 1) out.emplace_back(s, v);  // reachable, not adjacent
  }
  return out;
}

std::vector<std::pair<int, int>> candidates_additive(const Network& g_obs) {
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : g_obs.edge_pairs())
    if (u != v) out.emplace_back(u, v);
  return out;
}

std::vector<ScoredPair> label_candidates(const std::vector<std::pair<int, int>>& candidates,
                                         const std::vector<ChangedPair>& changed,
                                         NoiseSpec::Kind kind) {
  std::unordered_set<std::uint64_t> changed_keys;
  changed_keys.reserve(changed.size());
  for (const auto& c : changed) changed_keys.insert(pair_key(c.u, c.v));
  bool positive_if_changed = kind == NoiseSpec::Kind::SubtractiveER;
  std::vector<ScoredPair> out;
  out.reserve(candidates.size());
  for (auto [u, v] : candidates) {
    ScoredPair sp;
    sp.u = u;
    sp.v = v;
    bool in_changed = changed_keys.count(pair_key(u, v)) > 0;
    sp.positive = positive_if_changed ? in_changed : !in_changed;
    out.push_back(sp);
  }
  return out;
}

namespace {

double jaccard_pair(const Network& g, int u, int v) {
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  std::size_t inter = 0;
  std::size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i].first == nv[j].first) {
      ++inter;
      ++i;
      ++j;
    } else if (nu[i].first < nv[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  std::size_t uni = nu.size() + nv.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double adamic_adar_pair(const Network& g, int u, int v) {
  const auto& nu = g.neighbors(u);
  const auto& nv = g.neighbors(v);
  double s = 0.0;
  std::size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i].first == nv[j].first) {
      int z = nu[i].first;
      int d = g.degree(z);
      if (d < 2)
        throw method_unavailable_error("adamic-adar: common neighbor of degree < 2");
      s += 1.0 / std::log(static_cast<double>(d));
      ++i;
      ++j;
    } else if (nu[i].first < nv[j].first) {
      ++i;
    } else {
      ++j;
    }
  }
  return s;
}

}  // namespace

std::vector<ScoredPair> baseline_scores(const Network& g, std::vector<ScoredPair> candidates,
                                        BaselineMethod method) {
  if (method == BaselineMethod::AdamicAdar && g.has_self_edges())
    throw method_unavailable_error("adamic-adar is undefined on graphs with self-edges");
  for (ScoredPair& sp : candidates) {
    switch (method) {
      case BaselineMethod::JaccardIndex:
        sp.score = jaccard_pair(g, sp.u, sp.v);
        break;
      case BaselineMethod::PreferentialAttachment:
        sp.score = static_cast<double>(g.degree(sp.u)) * static_cast<double>(g.degree(sp.v));
        break;
      case BaselineMethod::AdamicAdar:
        sp.score = adamic_adar_pair(g, sp.u, sp.v);
        break;
    }
  }
  return candidates;
}

DenoiseResult denoise_pipeline(const Network& g_obs, const std::vector<ChangedPair>& changed,
                               NoiseSpec::Kind kind, const NdlParams& ndl_params,
                               const NdrParams& ndr_params, bool all_nonedges) {
  auto candidates = kind == NoiseSpec::Kind::SubtractiveER
                        ? candidates_subtractive(g_obs, ndr_params.k, all_nonedges)
                        : candidates_additive(g_obs);
  auto labeled = label_candidates(candidates, changed, kind);
  bool has_pos = false;
  bool has_neg = false;
  for (const auto& sp : labeled) (sp.positive ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw degenerate_error("denoise run is degenerate: candidates are single-class");

  DenoiseResult res;
  LearnResult learned = learn_dictionary(g_obs, ndl_params);
  res.dictionary = std::move(learned.dictionary);
  res.reconstruction = reconstruct(g_obs, res.dictionary, ndr_params);
  for (ScoredPair& sp : labeled) sp.score = res.reconstruction.weights.weight(sp.u, sp.v);
  res.scores = std::move(labeled);
  return res;
}

RocCurve roc_auc(const std::vector<ScoredPair>& scored) {
  std::size_t pos = 0, neg = 0;
  for (const auto& sp : scored) (sp.positive ? pos : neg) += 1;
  if (pos == 0 || neg == 0)
    throw metric_error("roc_auc needs at least one positive and one negative");

  // Mann-Whitney with midranks: ties between classes get half credit.
  std::vector<const ScoredPair*> order;
  order.reserve(scored.size());
  for (const auto& sp : scored) order.push_back(&sp);
  std::sort(order.begin(), order.end(),
            [](const ScoredPair* a, const ScoredPair* b) { return a->score < b->score; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && order[j]->score == order[i]->score) ++j;
    double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t l = i; l < j; ++l)
      if (order[l]->positive) rank_sum_pos += midrank;
    i = j;
  }
  RocCurve out;
  double p = static_cast<double>(pos);
  double n = static_cast<double>(neg);
  out.auc = (rank_sum_pos - p * (p + 1.0) / 2.0) / (p * n);

  // Curve points at every distinct threshold, sweeping from high to low.
  out.points.emplace_back(0.0, 0.0);
  std::size_t tp = 0, fp = 0;
  std::size_t h = order.size();
  while (h > 0) {
    double s = order[h - 1]->score;
    while (h > 0 && order[h - 1]->score == s) {
      (order[h - 1]->positive ? tp : fp) += 1;
      --h;
    }
    out.points.emplace_back(static_cast<double>(fp) / n, static_cast<double>(tp) / p);
  }
  return out;
}

SplitEval classify_with_split(const std::vector<ScoredPair>& scored, std::uint64_t split_seed,
                              double train_frac, double val_frac) {
  if (!(train_frac >= 0.0) || !(val_frac > 0.0) || train_frac + val_frac >= 1.0)
    throw parameter_error("classify_with_split: fractions must satisfy 0 <= train, 0 < val, train+val < 1");
  std::size_t m = scored.size();
  std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(m));
  std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(m));
  if (n_val < 1 || n_train + n_val >= m)
    throw degenerate_error("classify_with_split: not enough candidates to split");

  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  Rng rng(split_seed, 0x73706c69);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(idx[i], idx[j]);
  }

  auto val_begin = idx.begin() + n_train;
  auto val_end = val_begin + n_val;
  // Candidate thresholds: every distinct validation score, plus one below all
  // of them so "predict everything positive" is reachable.
  std::vector<double> cand;
  cand.reserve(n_val + 1);
  for (auto it = val_begin; it != val_end; ++it) cand.push_back(scored[*it].score);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.insert(cand.begin(), cand.front() - 1.0);

  double best_theta = cand.front();
  std::size_t best_correct = 0;
  for (double theta : cand) {
    std::size_t correct = 0;
    for (auto it = val_begin; it != val_end; ++it) {
      const ScoredPair& sp = scored[*it];
      bool predicted = sp.score > theta;
      if (predicted == sp.positive) ++correct;
    }
    if (correct > best_correct) {  // ties keep the earlier, smaller theta
      best_correct = correct;
      best_theta = theta;
    }
  }

  SplitEval ev;
  ev.theta = best_theta;
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (auto it = val_end; it != idx.end(); ++it) {
    const ScoredPair& sp = scored[*it];
    bool predicted = sp.score > best_theta;
    if (predicted && sp.positive) ++tp;
    else if (predicted) ++fp;
    else if (sp.positive) ++fn;
    else ++tn;
  }
  std::size_t total = tp + fp + tn + fn;
  ev.accuracy = total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
  ev.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  ev.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  return ev;
}

}  // namespace ndl
