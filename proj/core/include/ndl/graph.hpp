#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "ndl/errors.hpp"
#include "ndl/rng.hpp"

namespace ndl {

/// Undirected weighted network over contiguous node ids 0..n-1.
///
/// A pair is adjacent iff its stored weight is > 0; an absent pair reads as
/// weight 0. Self-edges are permitted. Neighbor lists are kept sorted by id.
class Network {
public:
  Network() = default;
  /// n isolated nodes labelled "0".."n-1".
  explicit Network(int n);
  Network(int n, std::vector<std::string> labels);

  int node_count() const { return static_cast<int>(adj_.size()); }
  /// Number of unordered adjacent pairs; a self-edge counts once.
  std::size_t edge_count() const { return edge_count_; }

  /// Neighbors of v sorted ascending; contains v itself iff a self-edge exists.
  const std::vector<std::pair<int, double>>& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return static_cast<int>(adj_[v].size()); }
  /// Sum of incident weights (adjacency-matrix row sum; self-edge counted once).
  double strength(int v) const;

  double weight(int u, int v) const;
  bool has_edge(int u, int v) const { return weight(u, v) > 0.0; }

  /// Set the weight of the unordered pair {u,v}; w must be > 0. w == 0 removes.
  void set_weight(int u, int v, double w);
  void remove_edge(int u, int v) { set_weight(u, v, 0.0); }

  /// All unordered adjacent pairs (u,v) with u <= v, lexicographic.
  std::vector<std::pair<int, int>> edge_pairs() const;

  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool has_self_edges() const;
  bool is_connected() const;
  /// Component id per node, ids dense from 0 in order of first appearance.
  std::vector<int> component_ids() const;
  /// Two-coloring with colors {0,1}; empty vector when not bipartite.
  /// Isolated nodes get color 0.
  std::vector<int> bipartite_classes() const;

  bool operator==(const Network& o) const {
    return adj_ == o.adj_ && labels_ == o.labels_;
  }

private:
  void check_node(int v) const;

  std::vector<std::vector<std::pair<int, double>>> adj_;
  std::vector<std::string> labels_;
  std::size_t edge_count_ = 0;
};

/// Random-graph model parameters.
struct ModelSpec {
  enum class Kind { ER, WS, BA, SBM };
  Kind kind = Kind::ER;
  int n = 0;
  double p = 0.0;               // ER/WS/SBM edge or rewiring probability
  int k = 0;                    // WS: even neighbor count
  int n0 = 0;                   // BA: seed-node / attachment count
  std::vector<int> sizes;       // SBM block sizes
  std::vector<std::vector<double>> block_p;  // SBM symmetric block matrix

  static ModelSpec er(int n, double p);
  static ModelSpec ws(int n, int k, double p);
  static ModelSpec ba(int n, int n0);
  static ModelSpec sbm(std::vector<int> sizes, std::vector<std::vector<double>> block_p);
};

/// Deterministic in (spec, seed).
Network generate(const ModelSpec& spec, std::uint64_t seed);

/// Ground-truth class of a changed pair relative to the original graph.
enum class PairLabel { true_edge, false_edge };

/// Noise model parameters for corrupt().
struct NoiseSpec {
  enum class Kind { SubtractiveER, AdditiveER, AdditiveWS };
  Kind kind = Kind::AdditiveER;
  double fraction = 0.5;  // in (0,1); share of edges removed/added
  int ws_n0 = 100;        // AdditiveWS: overlay node count
  int ws_k0 = 20;         // AdditiveWS: overlay neighbor count (even)
  double ws_p = 0.3;      // AdditiveWS: overlay rewiring probability

  static NoiseSpec subtractive_er(double fraction = 0.5);
  static NoiseSpec additive_er(double fraction = 0.5);
  static NoiseSpec additive_ws(int n0 = 100, int k0 = 20, double p = 0.3);
};

struct ChangedPair {
  int u, v;          // u <= v
  PairLabel label;   // removed pairs are true edges; added pairs are false ones
};

struct CorruptionResult {
  Network graph;
  std::vector<ChangedPair> changed;  // sorted by (u,v)
};

/// Apply the noise model; deterministic in (graph, spec, seed).
/// SubtractiveER keeps the graph connected by protecting a uniform spanning tree.
CorruptionResult corrupt(const Network& g, const NoiseSpec& spec, std::uint64_t seed);

/// Exactly uniform spanning tree via loop-erased random walks.
/// Requires a connected graph; returns tree edges as (u,v) with u <= v.
std::vector<std::pair<int, int>> uniform_spanning_tree(const Network& g, Rng& rng);

struct StructuralStats {
  std::vector<std::size_t> degree_histogram;  // index = degree
  double mean_clustering = 0.0;               // self-edges ignored
  int diameter = 0;                           // max eccentricity over components
  bool connected = true;
};

StructuralStats structural_stats(const Network& g);

/// Parse "u v [w]" lines; '#' starts a comment line; labels are interned in
/// first-seen order. Throws parse_error (with line number) on malformed lines
/// and consistency_error on duplicate pairs with conflicting weights.
Network load_edge_list(const std::filesystem::path& path);

/// Inverse of load_edge_list up to graph identity; writes atomically.
/// Lines are "label_u label_v w" for pairs u <= v in id order, shortest
/// round-trip decimal weights.
void save_edge_list(const Network& g, const std::filesystem::path& path);

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double v);

/// Write a file atomically (temp file in the same directory, then rename).
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ndl
