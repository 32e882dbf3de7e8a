#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ndl/graph.hpp"
#include "ndl/ndl.hpp"
#include "ndl/ndr.hpp"

namespace ndl {

/// A candidate pair with its score and ground-truth class
/// (positive = the pair is an edge of the uncorrupted graph).
struct ScoredPair {
  int u = 0, v = 0;
  double score = 0.0;
  bool positive = false;
};

/// Candidates for recovering removed edges: non-adjacent pairs within graph
/// distance k of each other (all non-adjacent pairs when all_nonedges).
std::vector<std::pair<int, int>> candidates_subtractive(const Network& g_obs, int k,
                                                        bool all_nonedges = false);

/// Candidates for detecting added edges: every edge of the observed graph.
std::vector<std::pair<int, int>> candidates_additive(const Network& g_obs);

/// Ground-truth labels for candidates given the corruption record. Removed
/// pairs are the positives of a subtractive run; surviving edges are the
/// positives of an additive one.
std::vector<ScoredPair> label_candidates(const std::vector<std::pair<int, int>>& candidates,
                                         const std::vector<ChangedPair>& changed,
                                         NoiseSpec::Kind kind);

enum class BaselineMethod { JaccardIndex, PreferentialAttachment, AdamicAdar };

/// Classic neighborhood scores for the same candidates; labels are preserved.
/// AdamicAdar requires a graph without self-edges (method_unavailable_error).
std::vector<ScoredPair> baseline_scores(const Network& g, std::vector<ScoredPair> candidates,
                                        BaselineMethod method);

struct DenoiseResult {
  std::vector<ScoredPair> scores;  // reconstruction weight per candidate
  Dictionary dictionary;
  ReconstructionResult reconstruction;
};

/// Learn motifs from the observed graph alone, reconstruct it, and score the
/// candidate set by reconstructed weight (0 for pairs never visited).
/// Throws degenerate_error when the labeled candidates are single-class
/// (e.g. subtractive noise on a tree removed nothing).
DenoiseResult denoise_pipeline(const Network& g_obs, const std::vector<ChangedPair>& changed,
                               NoiseSpec::Kind kind, const NdlParams& ndl_params,
                               const NdrParams& ndr_params, bool all_nonedges = false);

struct RocCurve {
  double auc = 0.0;
  std::vector<std::pair<double, double>> points;  // (fpr, tpr) per distinct threshold
};

/// Threshold-free ranking quality; ties get half credit. Needs both classes.
RocCurve roc_auc(const std::vector<ScoredPair>& scored);

struct SplitEval {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double theta = 0.0;  // chosen on the validation portion
};

/// Shuffle into train/validation/test portions, pick the threshold that
/// maximizes validation accuracy (ties -> smaller theta), and report test
/// metrics for the classifier "positive iff score > theta".
SplitEval classify_with_split(const std::vector<ScoredPair>& scored, std::uint64_t split_seed,
                              double train_frac = 0.25, double val_frac = 0.25);

}  // namespace ndl
