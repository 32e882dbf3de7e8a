#pragma once

#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "ndl/factorization.hpp"
#include "ndl/graph.hpp"
#include "ndl/sampling.hpp"

namespace ndl {

/// Reconstruction parameters.
struct NdrParams {
  int k = 21;
  long T = 0;            // steps per pass; 0 = floor(n ln n)
  double lambda = 0.0;   // coding L1 weight
  double theta = 0.4;    // edge threshold used by threshold()
  double xi = 1.0;       // on-chain thinning factor (plain regime)
  bool denoising = false;  // hard off-chain regime: project patches and motifs,
                           // accumulate only at off-chain slot pairs
  bool inj_hom = false;  // walk on injective chains only
  McmcMode mode = McmcMode::PivotApprox;
  std::uint64_t seed = 0;
  long max_rejections = 1'000'000;
  int code_iters = 100;
  double code_tol = 1e-8;
  bool literal_offchain = false;  // one-sided on-chain bookkeeping
};

/// Running mean of reconstructed values per unordered node pair.
/// Every visit event counts once; the mean after j updates equals the
/// arithmetic mean of the j values.
class ReconstructionAccumulator {
public:
  void add(int u, int v, double value);
  long count(int u, int v) const;
  /// Mean of the values seen for {u,v}; 0 when the pair was never visited.
  double mean(int u, int v) const;
  /// Count-weighted combination with another accumulator.
  void merge(const ReconstructionAccumulator& o);
  /// (u, v, count, mean) sorted by (u, v) with u <= v.
  std::vector<std::tuple<int, int, long, double>> entries() const;
  std::size_t size() const { return cells_.size(); }

private:
  struct Cell {
    long count = 0;
    double mean = 0.0;
  };
  std::vector<std::pair<std::uint64_t, Cell>> sorted_cells() const;
  std::unordered_map<std::uint64_t, Cell> cells_;
};

struct ReconstructionResult {
  Network weights;  // averaged pair means as edge weights; never-visited = absent
  std::vector<ReconstructionAccumulator> passes;  // one, or two on bipartite graphs with odd k
  long steps_per_pass = 0;
};

/// Reconstruct a weighted network from one (or, on bipartite graphs with odd
/// k, two independently initialized) motif-sampling passes of T steps each.
/// Each step codes the current patch against the dictionary and folds the
/// decoded k x k values into the per-pair running means. denoising=true
/// projects both the patch and the motifs off-chain and skips on-chain slot
/// pairs in the accumulator; otherwise xi scales the on-chain entries of both
/// coding inputs and every slot pair accumulates.
ReconstructionResult reconstruct(const Network& g, const Dictionary& dict, const NdrParams& params);

/// Keep pairs with weight strictly greater than theta as weight-1 edges.
Network threshold(const Network& weights, double theta);

struct JaccardMetrics {
  double index = 0.0;
  double distance = 0.0;  // 1 - index
};

/// Jaccard agreement of two binary edge sets on the same node set.
/// Requires weight-1 edges and no self-edges; throws metric_error when both
/// graphs are empty.
JaccardMetrics jaccard_metrics(const Network& a, const Network& b);

struct PairWeight {
  int u, v;
  double w;
};

/// Visit-weighted Jaccard distance
///   sum w |A-B| / sum w max(A, B)
/// over the listed unordered pairs; throws metric_error when the denominator
/// vanishes.
double weighted_jaccard_distance(const Network& a, const Network& b,
                                 const std::vector<PairWeight>& weights);

struct LimitingReconstruction {
  Network weights;
  /// (u, v, expected visit events per step, limiting mean), sorted by (u, v).
  std::vector<std::tuple<int, int, double, double>> cells;
};

/// Exact T -> infinity reconstruction by enumerating every walk under the
/// chain's stationary law (capacity-guarded). Single-chain law; no
/// bipartite two-pass averaging.
LimitingReconstruction limiting_reconstruction(const Network& g, const Dictionary& dict,
                                               const NdrParams& params);

struct MesoscaleError {
  double mean = 0.0;     // Monte Carlo mean of ||A_x - Ahat_x||_1 (full matrix)
  double std_err = 0.0;  // standard error of the mean
  long samples = 0;
};

/// Patch-level coding error over injective walks sampled from the chain;
/// coding uses the plain regime (no off-chain projection, xi = 1).
MesoscaleError mesoscale_error(const Network& g, const Dictionary& dict, const NdrParams& params,
                               long samples);

struct BoundReport {
  double lhs = 0.0;    // visit-weighted Jaccard distance of the limiting reconstruction
  double rhs = 0.0;    // expected patch coding error / (2(k-1))
  double margin = 0.0; // rhs - lhs
  bool holds = false;
  bool exact = false;  // both sides from the enumeration oracle
  MesoscaleError mesoscale;  // the Monte Carlo estimate when exact is false
};

/// Check lhs <= rhs for the plain regime (denoising must be off). Tractable
/// graphs are evaluated exactly through the enumeration oracle; larger ones
/// fall back to a long finite run (empirical visit weights) against a Monte
/// Carlo patch error.
BoundReport bound_report(const Network& g, const Dictionary& dict, const NdrParams& params,
                         long fallback_T = 200'000, long fallback_samples = 20'000);

/// floor(n ln n), at least 1; the default pass length.
long default_recon_steps(int n);

}  // namespace ndl
