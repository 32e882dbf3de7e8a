#include "ndl/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace ndl {

namespace {

constexpr double enumeration_cap = 1e7;

void check_k(int k) {
  if (k < 2) throw parameter_error("chain motif requires k >= 2");
}

/// Draw w from p(w) proportional to A(v, w) * scale(w).
template <typename Scale>
int weighted_neighbor(const Network& g, int v, Rng& rng, Scale scale) {
  const auto& nbrs = g.neighbors(v);
  if (nbrs.empty()) throw dead_end_error("chain node has no neighbors");
  double total = 0.0;
  for (const auto& [w, wt] : nbrs) total += wt * scale(w);
  if (!(total > 0.0)) throw dead_end_error("no admissible extension from chain node");
  double r = rng.uniform01() * total;
  double acc = 0.0;
  int last = nbrs.back().first;
  for (const auto& [w, wt] : nbrs) {
    double m = wt * scale(w);
    if (m <= 0.0) continue;
    acc += m;
    last = w;
    if (r < acc) return w;
  }
  return last;
}

WalkTable make_walk_table_impl(const Network& g, int k, bool binary) {
  check_k(k);
  int n = g.node_count();
  WalkTable t;
  t.k = k;
  t.counts.assign(k, std::vector<double>(n, 0.0));
  std::fill(t.counts[0].begin(), t.counts[0].end(), 1.0);
  for (int j = 1; j < k; ++j)
    for (int v = 0; v < n; ++v) {
      double s = 0.0;
      for (const auto& [w, wt] : g.neighbors(v)) s += (binary ? 1.0 : wt) * t.counts[j - 1][w];
      t.counts[j][v] = s;
    }
  return t;
}

}  // namespace

bool Homomorphism::injective() const {
  std::vector<int> s(nodes);
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_valid_chain(const Network& g, const std::vector<int>& nodes) {
  if (nodes.empty()) return false;
  for (int v : nodes)
    if (v < 0 || v >= g.node_count()) return false;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (!(g.weight(nodes[i - 1], nodes[i]) > 0.0)) return false;
  return true;
}

WalkTable make_walk_table(const Network& g, int k) { return make_walk_table_impl(g, k, false); }

Homomorphism rejection_init(const Network& g, int k, Rng& rng) {
  check_k(k);
  int n = g.node_count();
  if (n == 0) throw structure_error("cannot sample from an empty graph");
  Homomorphism x;
  x.nodes.resize(k);
  long budget = 10L * n;
  for (long attempt = 0; attempt < budget; ++attempt) {
    for (int i = 0; i < k; ++i) x.nodes[i] = rng.below_int(n);
    if (is_valid_chain(g, x.nodes)) return x;
  }
  // Dense rejection failed; seed from a uniform edge and grow by neighbor steps.
  auto edges = g.edge_pairs();
  if (edges.empty()) throw structure_error("graph has no edges; no chain exists");
  auto [u, v] = edges[rng.below(edges.size())];
  if (rng.next() & 1u) std::swap(u, v);
  x.nodes[0] = u;
  if (k >= 2) x.nodes[1] = v;
  for (int i = 2; i < k; ++i)
    x.nodes[i] = weighted_neighbor(g, x.nodes[i - 1], rng, [](int) { return 1.0; });
  return x;
}

void pivot_update(const Network& g, const WalkTable& table, Homomorphism& x, bool exact, Rng& rng,
                  StepStats* stats) {
  int k = x.k();
  check_k(k);
  if (table.k != k) throw parameter_error("walk table was built for a different k");
  int v = x.nodes[0];
  if (g.neighbors(v).empty()) throw dead_end_error("pivot node is isolated");
  const auto& rowsum = table.counts[1];
  const auto& walks = table.counts[k - 1];
  // Random-walk proposal for the pivot.
  int l = weighted_neighbor(g, v, rng, [](int) { return 1.0; });
  double avl = g.weight(v, l);
  double alv = avl;  // symmetric adjacency
  double num = alv * rowsum[v];
  double den = avl * rowsum[l];
  if (exact) {
    num *= walks[l];
    den *= walks[v];
  }
  bool accept = den <= 0.0 ? true : (num >= den || rng.uniform01() < num / den);
  if (stats) stats->accepted = accept;
  if (accept) x.nodes[0] = l;
  // Tail resampling from the exact conditional given the pivot: the remaining
  // weight of position i is the (k-i)-step walk count.
  for (int i = 1; i < k; ++i) {
    const auto& remain = table.counts[k - 1 - i];
    x.nodes[i] = weighted_neighbor(g, x.nodes[i - 1], rng, [&](int w) { return remain[w]; });
  }
}

void glauber_update(const Network& g, Homomorphism& x, Rng& rng) {
  int k = x.k();
  check_k(k);
  for (int attempt = 0; attempt < k; ++attempt) {
    int pos = rng.below_int(k);
    int anchor;
    double total = 0.0;
    if (pos == 0) {
      anchor = x.nodes[1];
      for (const auto& [w, wt] : g.neighbors(anchor)) total += wt;
      if (total <= 0.0) continue;
      x.nodes[0] = weighted_neighbor(g, anchor, rng, [](int) { return 1.0; });
      return;
    }
    if (pos == k - 1) {
      anchor = x.nodes[k - 2];
      for (const auto& [w, wt] : g.neighbors(anchor)) total += wt;
      if (total <= 0.0) continue;
      x.nodes[k - 1] = weighted_neighbor(g, anchor, rng, [](int) { return 1.0; });
      return;
    }
    int left = x.nodes[pos - 1];
    int right = x.nodes[pos + 1];
    for (const auto& [w, wt] : g.neighbors(left)) total += wt * g.weight(w, right);
    if (total <= 0.0) continue;  // defensive; impossible from a valid chain
    x.nodes[pos] = weighted_neighbor(g, left, rng, [&](int w) { return g.weight(w, right); });
    return;
  }
  throw dead_end_error("no coordinate of the chain can be resampled");
}

void chain_update(const Network& g, const WalkTable& table, Homomorphism& x, McmcMode mode,
                  Rng& rng, StepStats* stats) {
  switch (mode) {
    case McmcMode::PivotExact:
      pivot_update(g, table, x, true, rng, stats);
      return;
    case McmcMode::PivotApprox:
      pivot_update(g, table, x, false, rng, stats);
      return;
    case McmcMode::Glauber:
      glauber_update(g, x, rng);
      if (stats) stats->accepted = true;
      return;
  }
  throw internal_error("chain_update: unknown mode");
}

long injective_step(const Network& g, const WalkTable& table, Homomorphism& x,
                    const SamplerConfig& cfg, Rng& rng) {
  if (cfg.max_rejections < 1) throw parameter_error("max_rejections must be >= 1");
  long rejections = 0;
  chain_update(g, table, x, cfg.mode, rng);
  while (!x.injective()) {
    if (++rejections > cfg.max_rejections)
      throw mixing_error("injective sampling exceeded max_rejections");
    chain_update(g, table, x, cfg.mode, rng);
  }
  return rejections;
}

MotifSampler::MotifSampler(const Network& g, int k, SamplerConfig cfg, Rng rng)
    : g_(g), k_(k), cfg_(cfg), rng_(rng), table_(make_walk_table(g, k)) {
  check_k(k);
  state_ = rejection_init(g_, k_, rng_);
  if (cfg_.injective && !state_.injective()) {
    // Bring the chain onto an injective state before the first step.
    long budget = cfg_.max_rejections;
    long used = 0;
    while (!state_.injective()) {
      if (++used > budget) throw mixing_error("could not find an injective starting state");
      state_ = rejection_init(g_, k_, rng_);
    }
  }
}

const Homomorphism& MotifSampler::step() {
  StepStats st;
  if (cfg_.injective) {
    rejections_ += injective_step(g_, table_, state_, cfg_, rng_);
    ++accepts_;  // acceptance tracking is per pivot move; see acceptance_rate
  } else {
    chain_update(g_, table_, state_, cfg_.mode, rng_, &st);
    if (st.accepted) ++accepts_;
  }
  ++steps_;
  return state_;
}

void MotifSampler::reset(Homomorphism x) {
  if (x.k() != k_ || !is_valid_chain(g_, x.nodes))
    throw parameter_error("reset state is not a valid chain of this sampler's k");
  if (cfg_.injective && !x.injective())
    throw parameter_error("reset state must be injective for an injective sampler");
  state_ = std::move(x);
}

double MotifSampler::acceptance_rate() const {
  return steps_ == 0 ? 1.0 : static_cast<double>(accepts_) / static_cast<double>(steps_);
}

std::vector<Homomorphism> enumerate_homomorphisms(const Network& g, int k, bool injective_only) {
  check_k(k);
  WalkTable binary = make_walk_table_impl(g, k, true);
  double total = 0.0;
  for (double c : binary.counts[k - 1]) total += c;
  if (total > enumeration_cap)
    throw capacity_error("graph admits more than 10^7 chain homomorphisms");
  std::vector<Homomorphism> out;
  out.reserve(static_cast<std::size_t>(total));
  std::vector<int> cur(k);
  auto dfs = [&](auto&& self, int depth) -> void {
    if (depth == k) {
      Homomorphism h;
      h.nodes = cur;
      if (!injective_only || h.injective()) out.push_back(std::move(h));
      return;
    }
    for (const auto& [w, wt] : g.neighbors(cur[depth - 1])) {
      cur[depth] = w;
      self(self, depth + 1);
    }
  };
  for (int v = 0; v < g.node_count(); ++v) {
    cur[0] = v;
    dfs(dfs, 1);
  }
  return out;
}

TargetKind target_for(McmcMode mode, bool injective) {
  bool hat = mode == McmcMode::PivotApprox;
  if (injective) return hat ? TargetKind::pi_hat_inj : TargetKind::pi_inj;
  return hat ? TargetKind::pi_hat : TargetKind::pi;
}

std::vector<std::pair<Homomorphism, double>> target_distribution(const Network& g, int k,
                                                                 TargetKind kind) {
  check_k(k);
  bool injective = kind == TargetKind::pi_inj || kind == TargetKind::pi_hat_inj;
  bool hat = kind == TargetKind::pi_hat || kind == TargetKind::pi_hat_inj;
  auto homs = enumerate_homomorphisms(g, k, injective);
  if (homs.empty()) throw structure_error("graph admits no chains of this length");
  WalkTable table = make_walk_table(g, k);
  int n = g.node_count();
  std::vector<std::pair<Homomorphism, double>> out;
  out.reserve(homs.size());
  double sum = 0.0;
  for (auto& h : homs) {
    double w = 1.0;
    for (int i = 1; i < k; ++i) w *= g.weight(h.nodes[i - 1], h.nodes[i]);
    if (hat) w /= static_cast<double>(n) * table.counts[k - 1][h.nodes[0]];
    sum += w;
    out.emplace_back(std::move(h), w);
  }
  if (!(sum > 0.0)) throw structure_error("stationary law has zero total mass");
  for (auto& [h, w] : out) w /= sum;
  return out;
}

ChainDiag chain_diagnostic(const Network& g, int k, McmcMode mode, bool injective, long steps,
                           std::uint64_t seed) {
  if (steps < 1) throw parameter_error("chain_diagnostic requires steps >= 1");
  auto target = target_distribution(g, k, target_for(mode, injective));
  // Dense occupation keyed by mixed-radix encoding; the enumeration cap keeps
  // n^k within range.
  double states_bound = std::pow(static_cast<double>(g.node_count()), k);
  if (states_bound > 4e15) throw capacity_error("state space too large to key");
  auto key_of = [&](const std::vector<int>& nodes) {
    std::uint64_t key = 0;
    for (int v : nodes) key = key * static_cast<std::uint64_t>(g.node_count()) + v;
    return key;
  };
  std::unordered_map<std::uint64_t, double> target_p;
  target_p.reserve(target.size());
  for (const auto& [h, p] : target) target_p[key_of(h.nodes)] += p;

  SamplerConfig cfg;
  cfg.mode = mode;
  cfg.injective = injective;
  MotifSampler sampler(g, k, cfg, Rng(seed, 0x6d636d63));
  std::unordered_map<std::uint64_t, long> occ;
  occ.reserve(target.size());
  for (long t = 0; t < steps; ++t) occ[key_of(sampler.step().nodes)] += 1;

  double tv = 0.0;
  for (const auto& [key, p] : target_p) {
    auto it = occ.find(key);
    double emp = it == occ.end() ? 0.0 : static_cast<double>(it->second) / steps;
    tv += std::abs(emp - p);
  }
  for (const auto& [key, c] : occ)
    if (!target_p.count(key)) tv += static_cast<double>(c) / steps;
  ChainDiag d;
  d.tv = 0.5 * tv;
  d.acceptance_rate = sampler.acceptance_rate();
  d.steps = steps;
  d.states = target_p.size();
  return d;
}

}  // namespace ndl
