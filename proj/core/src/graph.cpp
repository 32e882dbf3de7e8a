#include "ndl/graph.hpp"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace ndl {

namespace {

std::vector<std::string> default_labels(int n) {
  if (n < 0) throw parameter_error("node count must be nonnegative");
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

std::uint64_t pair_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

/// Uniform m-subset of items, order-normalized afterwards by the caller.
template <typename T>
std::vector<T> sample_subset(std::vector<T> items, std::size_t m, Rng& rng) {
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    std::swap(items[i], items[j]);
  }
  items.resize(m);
  return items;
}

/// Weight-proportional neighbor draw; requires degree(v) >= 1.
int random_neighbor(const Network& g, int v, Rng& rng) {
  const auto& nbrs = g.neighbors(v);
  if (nbrs.empty()) throw structure_error("random walk reached an isolated node");
  double total = 0.0;
  for (const auto& [w, wt] : nbrs) total += wt;
  double r = rng.uniform01() * total;
  double acc = 0.0;
  for (const auto& [w, wt] : nbrs) {
    acc += wt;
    if (r < acc) return w;
  }
  return nbrs.back().first;
}

}  // namespace

Network::Network(int n) : Network(n, default_labels(n)) {}

Network::Network(int n, std::vector<std::string> labels) {
  if (n < 0) throw parameter_error("node count must be nonnegative");
  if (static_cast<int>(labels.size()) != n)
    throw parameter_error("label count does not match node count");
  adj_.resize(n);
  labels_ = std::move(labels);
}

void Network::check_node(int v) const {
  if (v < 0 || v >= node_count()) throw parameter_error("node id out of range");
}

double Network::weight(int u, int v) const {
  check_node(u);
  check_node(v);
  const auto& nbrs = adj_[u];
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const std::pair<int, double>& e, int x) { return e.first < x; });
  if (it != nbrs.end() && it->first == v) return it->second;
  return 0.0;
}

double Network::strength(int v) const {
  check_node(v);
  double s = 0.0;
  for (const auto& [w, wt] : adj_[v]) s += wt;
  return s;
}

void Network::set_weight(int u, int v, double w) {
  check_node(u);
  check_node(v);
  if (w < 0.0 || !std::isfinite(w)) throw parameter_error("edge weight must be finite and >= 0");
  auto upsert = [&](int a, int b) {
    auto& nbrs = adj_[a];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), b,
                               [](const std::pair<int, double>& e, int x) { return e.first < x; });
    bool present = it != nbrs.end() && it->first == b;
    if (w == 0.0) {
      if (present) nbrs.erase(it);
      return present;
    }
    if (present) {
      it->second = w;
      return false;
    }
    nbrs.insert(it, {b, w});
    return true;
  };
  bool changed = upsert(u, v);
  if (u != v) upsert(v, u);
  if (w == 0.0) {
    if (changed) --edge_count_;
  } else {
    if (changed) ++edge_count_;
  }
}

std::vector<std::pair<int, int>> Network::edge_pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(edge_count_);
  for (int u = 0; u < node_count(); ++u)
    for (const auto& [v, wt] : adj_[u])
      if (v >= u) out.emplace_back(u, v);
  return out;
}

bool Network::has_self_edges() const {
  for (int u = 0; u < node_count(); ++u)
    if (weight(u, u) > 0.0) return true;
  return false;
}

std::vector<int> Network::component_ids() const {
  std::vector<int> comp(node_count(), -1);
  int next = 0;
  std::deque<int> queue;
  for (int s = 0; s < node_count(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    queue.push_back(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const auto& [v, wt] : adj_[u])
        if (comp[v] < 0) {
          comp[v] = next;
          queue.push_back(v);
        }
    }
    ++next;
  }
  return comp;
}

bool Network::is_connected() const {
  if (node_count() == 0) return true;
  auto comp = component_ids();
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

std::vector<int> Network::bipartite_classes() const {
  std::vector<int> color(node_count(), -1);
  std::deque<int> queue;
  for (int s = 0; s < node_count(); ++s) {
    if (color[s] >= 0) continue;
    color[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (const auto& [v, wt] : adj_[u]) {
        if (color[v] < 0) {
          color[v] = 1 - color[u];
          queue.push_back(v);
        } else if (color[v] == color[u]) {
          return {};
        }
      }
    }
  }
  return color;
}

ModelSpec ModelSpec::er(int n, double p) {
  ModelSpec s;
  s.kind = Kind::ER;
  s.n = n;
  s.p = p;
  return s;
}

ModelSpec ModelSpec::ws(int n, int k, double p) {
  ModelSpec s;
  s.kind = Kind::WS;
  s.n = n;
  s.k = k;
  s.p = p;
  return s;
}

ModelSpec ModelSpec::ba(int n, int n0) {
  ModelSpec s;
  s.kind = Kind::BA;
  s.n = n;
  s.n0 = n0;
  return s;
}

ModelSpec ModelSpec::sbm(std::vector<int> sizes, std::vector<std::vector<double>> block_p) {
  ModelSpec s;
  s.kind = Kind::SBM;
  s.sizes = std::move(sizes);
  s.block_p = std::move(block_p);
  s.n = 0;
  for (int b : s.sizes) s.n += b;
  return s;
}

namespace {

Network generate_er(int n, double p, Rng& rng) {
  if (n < 1) throw parameter_error("er: n must be >= 1");
  if (p < 0.0 || p > 1.0) throw parameter_error("er: p must be in [0,1]");
  Network g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) g.set_weight(u, v, 1.0);
  return g;
}

Network generate_ws(int n, int k, double p, Rng& rng) {
  if (n < 3) throw parameter_error("ws: n must be >= 3");
  if (k < 2 || k % 2 != 0) throw parameter_error("ws: k must be even and >= 2");
  if (k > n - 2) throw parameter_error("ws: k must be <= n-2");
  if (p < 0.0 || p > 1.0) throw parameter_error("ws: p must be in [0,1]");
  Network g(n);
  for (int j = 1; j <= k / 2; ++j)
    for (int i = 0; i < n; ++i) g.set_weight(i, (i + j) % n, 1.0);
  // Rewire ring edges in canonical order: one end survives (chosen with
  // probability 1/2), the other reattaches uniformly; duplicates and
  // self-edges are rejected and resampled.
  for (int j = 1; j <= k / 2; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = i;
      int b = (i + j) % n;
      if (!g.has_edge(a, b)) continue;  // already rewired away
      if (rng.uniform01() >= p) continue;
      int kept = (rng.next() & 1u) ? a : b;
      int target = -1;
      for (int attempt = 0; attempt < 10 * n; ++attempt) {
        int t = rng.below_int(n);
        if (t == kept || g.has_edge(kept, t)) continue;
        target = t;
        break;
      }
      if (target < 0) continue;  // saturated neighborhood; keep the edge
      g.remove_edge(a, b);
      g.set_weight(kept, target, 1.0);
    }
  }
  return g;
}

Network generate_ba(int n, int n0, Rng& rng) {
  if (n0 < 1) throw parameter_error("ba: n0 must be >= 1");
  if (n < n0) throw parameter_error("ba: n must be >= n0");
  Network g(n);
  std::vector<int> endpoints;  // one entry per edge endpoint; degree-proportional pool
  for (int v = n0; v < n; ++v) {
    int m = std::min(n0, v);
    std::vector<int> targets;
    std::unordered_set<int> seen;
    if (endpoints.empty()) {
      std::vector<int> existing(v);
      for (int i = 0; i < v; ++i) existing[i] = i;
      targets = sample_subset(std::move(existing), m, rng);
    } else {
      while (static_cast<int>(targets.size()) < m) {
        int t = endpoints[rng.below(endpoints.size())];
        if (seen.insert(t).second) targets.push_back(t);
      }
    }
    for (int t : targets) {
      g.set_weight(v, t, 1.0);
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return g;
}

Network generate_sbm(const std::vector<int>& sizes, const std::vector<std::vector<double>>& bp,
                     Rng& rng) {
  if (sizes.empty()) throw parameter_error("sbm: sizes must be nonempty");
  for (int s : sizes)
    if (s < 1) throw parameter_error("sbm: block sizes must be >= 1");
  std::size_t b = sizes.size();
  if (bp.size() != b) throw parameter_error("sbm: block matrix size does not match sizes");
  for (std::size_t i = 0; i < b; ++i) {
    if (bp[i].size() != b) throw parameter_error("sbm: block matrix must be square");
    for (std::size_t j = 0; j < b; ++j) {
      if (bp[i][j] < 0.0 || bp[i][j] > 1.0)
        throw parameter_error("sbm: block probabilities must be in [0,1]");
      if (bp[i][j] != bp[j][i]) throw parameter_error("sbm: block matrix must be symmetric");
    }
  }
  int n = 0;
  std::vector<int> block_of;
  for (std::size_t i = 0; i < b; ++i) {
    n += sizes[i];
    block_of.insert(block_of.end(), sizes[i], static_cast<int>(i));
  }
  Network g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.uniform01() < bp[block_of[u]][block_of[v]]) g.set_weight(u, v, 1.0);
  return g;
}

}  // namespace

Network generate(const ModelSpec& spec, std::uint64_t seed) {
  Rng rng(seed, 0x67656e);  // stream tag distinct from corruption/sampling streams
  switch (spec.kind) {
    case ModelSpec::Kind::ER:
      return generate_er(spec.n, spec.p, rng);
    case ModelSpec::Kind::WS:
      return generate_ws(spec.n, spec.k, spec.p, rng);
    case ModelSpec::Kind::BA:
      return generate_ba(spec.n, spec.n0, rng);
    case ModelSpec::Kind::SBM:
      return generate_sbm(spec.sizes, spec.block_p, rng);
  }
  throw internal_error("generate: unknown model kind");
}

std::vector<std::pair<int, int>> uniform_spanning_tree(const Network& g, Rng& rng) {
  int n = g.node_count();
  if (n == 0) return {};
  if (!g.is_connected()) throw structure_error("uniform_spanning_tree requires a connected graph");
  std::vector<bool> in_tree(n, false);
  std::vector<int> next(n, -1);
  in_tree[0] = true;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(n - 1);
  for (int v = 0; v < n; ++v) {
    if (in_tree[v]) continue;
    int u = v;
    while (!in_tree[u]) {
      next[u] = random_neighbor(g, u, rng);
      u = next[u];
    }
    u = v;
    while (!in_tree[u]) {
      in_tree[u] = true;
      edges.emplace_back(std::min(u, next[u]), std::max(u, next[u]));
      u = next[u];
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

NoiseSpec NoiseSpec::subtractive_er(double fraction) {
  NoiseSpec s;
  s.kind = Kind::SubtractiveER;
  s.fraction = fraction;
  return s;
}

NoiseSpec NoiseSpec::additive_er(double fraction) {
  NoiseSpec s;
  s.kind = Kind::AdditiveER;
  s.fraction = fraction;
  return s;
}

NoiseSpec NoiseSpec::additive_ws(int n0, int k0, double p) {
  NoiseSpec s;
  s.kind = Kind::AdditiveWS;
  s.ws_n0 = n0;
  s.ws_k0 = k0;
  s.ws_p = p;
  return s;
}

namespace {

CorruptionResult corrupt_subtractive_er(const Network& g, double fraction, Rng& rng) {
  auto tree = uniform_spanning_tree(g, rng);  // also checks connectivity
  std::unordered_set<std::uint64_t> protect;
  for (auto [u, v] : tree) protect.insert(pair_key(u, v));
  std::vector<std::pair<int, int>> removable;
  for (auto [u, v] : g.edge_pairs())
    if (!protect.count(pair_key(u, v))) removable.emplace_back(u, v);
  std::size_t m = static_cast<std::size_t>(fraction * static_cast<double>(removable.size()));
  CorruptionResult out;
  out.graph = g;
  auto removed = sample_subset(std::move(removable), m, rng);
  std::sort(removed.begin(), removed.end());
  for (auto [u, v] : removed) {
    out.graph.remove_edge(u, v);
    out.changed.push_back({u, v, PairLabel::true_edge});
  }
  return out;
}

CorruptionResult corrupt_additive_er(const Network& g, double fraction, Rng& rng) {
  int n = g.node_count();
  std::size_t m = static_cast<std::size_t>(fraction * static_cast<double>(g.edge_count()));
  std::size_t self_edges = 0;
  for (int v = 0; v < n; ++v)
    if (g.weight(v, v) > 0.0) ++self_edges;
  std::size_t total_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
  std::size_t nonedges = total_pairs - (g.edge_count() - self_edges);
  if (nonedges < m) throw structure_error("additive noise: not enough non-adjacent pairs");
  CorruptionResult out;
  out.graph = g;
  std::unordered_set<std::uint64_t> added;
  std::vector<std::pair<int, int>> pairs;
  std::size_t budget = 100 * m + 1000;
  while (pairs.size() < m && budget-- > 0) {
    int u = rng.below_int(n);
    int v = rng.below_int(n);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    if (g.has_edge(u, v)) continue;
    if (!added.insert(pair_key(u, v)).second) continue;
    pairs.emplace_back(u, v);
  }
  if (pairs.size() < m) {
    // Dense graph: fall back to exact enumeration of the remaining non-edges.
    std::vector<std::pair<int, int>> rest;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (!g.has_edge(u, v) && !added.count(pair_key(u, v))) rest.emplace_back(u, v);
    auto extra = sample_subset(std::move(rest), m - pairs.size(), rng);
    pairs.insert(pairs.end(), extra.begin(), extra.end());
  }
  std::sort(pairs.begin(), pairs.end());
  for (auto [u, v] : pairs) {
    out.graph.set_weight(u, v, 1.0);
    out.changed.push_back({u, v, PairLabel::false_edge});
  }
  return out;
}

CorruptionResult corrupt_additive_ws(const Network& g, const NoiseSpec& spec, Rng& rng) {
  int n = g.node_count();
  if (spec.ws_n0 > n) throw parameter_error("additive ws: overlay larger than the graph");
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  auto chosen = sample_subset(std::move(all), spec.ws_n0, rng);
  Rng overlay_rng = rng.split(1);
  Network overlay = generate_ws(spec.ws_n0, spec.ws_k0, spec.ws_p, overlay_rng);
  CorruptionResult out;
  out.graph = g;
  std::vector<std::pair<int, int>> added;
  for (auto [a, b] : overlay.edge_pairs()) {
    int u = chosen[a];
    int v = chosen[b];
    if (u > v) std::swap(u, v);
    if (out.graph.has_edge(u, v)) continue;
    out.graph.set_weight(u, v, 1.0);
    added.emplace_back(u, v);
  }
  std::sort(added.begin(), added.end());
  for (auto [u, v] : added) out.changed.push_back({u, v, PairLabel::false_edge});
  return out;
}

}  // namespace

CorruptionResult corrupt(const Network& g, const NoiseSpec& spec, std::uint64_t seed) {
  Rng rng(seed, 0x636f72);
  switch (spec.kind) {
    case NoiseSpec::Kind::SubtractiveER:
      if (spec.fraction <= 0.0 || spec.fraction >= 1.0)
        throw parameter_error("noise fraction must be in (0,1)");
      return corrupt_subtractive_er(g, spec.fraction, rng);
    case NoiseSpec::Kind::AdditiveER:
      if (spec.fraction <= 0.0 || spec.fraction >= 1.0)
        throw parameter_error("noise fraction must be in (0,1)");
      return corrupt_additive_er(g, spec.fraction, rng);
    case NoiseSpec::Kind::AdditiveWS:
      return corrupt_additive_ws(g, spec, rng);
  }
  throw internal_error("corrupt: unknown noise kind");
}

StructuralStats structural_stats(const Network& g) {
  int n = g.node_count();
  StructuralStats st;
  int max_deg = 0;
  for (int v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  st.degree_histogram.assign(max_deg + 1, 0);
  for (int v = 0; v < n; ++v) ++st.degree_histogram[g.degree(v)];

  double cl_sum = 0.0;
  for (int v = 0; v < n; ++v) {
    std::vector<int> nbrs;
    for (const auto& [w, wt] : g.neighbors(v))
      if (w != v) nbrs.push_back(w);
    int d = static_cast<int>(nbrs.size());
    if (d < 2) continue;
    int tri = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (g.has_edge(nbrs[i], nbrs[j])) ++tri;
    cl_sum += 2.0 * tri / (static_cast<double>(d) * (d - 1));
  }
  st.mean_clustering = n > 0 ? cl_sum / n : 0.0;

  st.connected = g.is_connected();
  int diameter = 0;
  std::vector<int> dist(n);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    queue.push_back(s);
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      diameter = std::max(diameter, dist[u]);
      for (const auto& [v, wt] : g.neighbors(u))
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
    }
  }
  st.diameter = diameter;
  return st;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void atomic_write_file(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw io_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw io_error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

Network load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::unordered_map<std::string, int> ids;
  std::vector<std::string> labels;
  struct Entry {
    int u, v;
    double w;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::unordered_map<std::uint64_t, double> seen;
  auto intern = [&](const std::string& s) {
    auto it = ids.find(s);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(labels.size());
    ids.emplace(s, id);
    labels.push_back(s);
    return id;
  };
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string tu, tv, tw, extra;
    if (!(ss >> tu)) continue;  // blank line
    if (tu[0] == '#') continue;
    if (!(ss >> tv))
      throw parse_error("line " + std::to_string(lineno) + ": expected 'u v [w]'");
    double w = 1.0;
    if (ss >> tw) {
      if (ss >> extra)
        throw parse_error("line " + std::to_string(lineno) + ": trailing tokens after weight");
      const char* b = tw.data();
      const char* e = b + tw.size();
      auto res = std::from_chars(b, e, w);
      if (res.ec != std::errc() || res.ptr != e)
        throw parse_error("line " + std::to_string(lineno) + ": cannot parse weight '" + tw + "'");
      if (!(w > 0.0) || !std::isfinite(w))
        throw parse_error("line " + std::to_string(lineno) + ": weight must be finite and > 0");
    }
    int u = intern(tu);
    int v = intern(tv);
    std::uint64_t key = pair_key(u, v);
    auto it = seen.find(key);
    if (it != seen.end()) {
      if (it->second != w)
        throw consistency_error("line " + std::to_string(lineno) + ": pair '" + tu + "' '" + tv +
                                "' repeats with a different weight");
      continue;
    }
    seen.emplace(key, w);
    entries.push_back({u, v, w, lineno});
  }
  const int n = static_cast<int>(labels.size());
  Network g(n, std::move(labels));
  for (const auto& e : entries) g.set_weight(e.u, e.v, e.w);
  return g;
}

void save_edge_list(const Network& g, const std::filesystem::path& path) {
  std::string out;
  for (auto [u, v] : g.edge_pairs()) {
    out += g.label(u);
    out += ' ';
    out += g.label(v);
    out += ' ';
    out += format_double(g.weight(u, v));
    out += '\n';
  }
  atomic_write_file(path, out);
}

}  // namespace ndl
