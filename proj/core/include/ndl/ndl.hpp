#pragma once

#include <cstdint>
#include <vector>

#include "ndl/factorization.hpp"
#include "ndl/graph.hpp"
#include "ndl/sampling.hpp"

namespace ndl {

/// Dictionary-learning parameters.
struct NdlParams {
  int k = 21;                                  // chain length
  int r = 25;                                  // number of motifs
  int T = 100;                                 // minibatch rounds
  int N = 100;                                 // walks per minibatch
  double lambda = 1.0;                         // coding L1 weight
  McmcMode mode = McmcMode::PivotApprox;
  std::uint64_t seed = 0;
  long max_rejections = 1'000'000;             // per injective sample
  int code_iters = 100;
  double code_tol = 1e-8;
  int dict_sweeps = 5;
};

struct LearnDiag {
  int t = 0;            // minibatch index, 1-based
  double fit_rel = 0.0; // ||X_t - W_{t-1} H_t||_F / ||X_t||_F
  long rejections = 0;  // non-injective states passed through in round t
};

struct LearnResult {
  Dictionary dictionary;
  AggregateState aggregates;
  std::vector<LearnDiag> trace;  // one row per minibatch
};

/// Learn r motifs from T minibatches of N injective walks of one persistent
/// chain. The dictionary starts from column-normalized uniform noise and is
/// refreshed by one online factorization step per minibatch. Deterministic in
/// (graph, params): identical inputs give bit-identical dictionaries.
/// Throws structure_error when the graph admits no injective k-walk
/// discoverable within a 10^5-rejection probe.
LearnResult learn_dictionary(const Network& g, const NdlParams& params);

struct DominanceScores {
  std::vector<double> scores;  // sqrt(p(i,i)) per motif, original order
  std::vector<int> order;      // motif indices sorted by descending score, ties by index
};

/// Motif prominence from the aggregates' diagonal.
DominanceScores dominance_scores(const AggregateState& agg);

}  // namespace ndl
