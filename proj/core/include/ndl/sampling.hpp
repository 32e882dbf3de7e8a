#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ndl/graph.hpp"
#include "ndl/rng.hpp"

namespace ndl {

enum class McmcMode { PivotExact, PivotApprox, Glauber };

struct SamplerConfig {
  McmcMode mode = McmcMode::PivotApprox;
  bool injective = false;
  long max_rejections = 1'000'000;  // per injective step
};

/// A walk x(1..k) whose consecutive nodes are adjacent in the graph.
struct Homomorphism {
  std::vector<int> nodes;

  int k() const { return static_cast<int>(nodes.size()); }
  bool injective() const;
};

/// True iff every consecutive pair carries positive weight.
bool is_valid_chain(const Network& g, const std::vector<int>& nodes);

/// Weighted walk counts N_j(v) = sum over j-step walks from v of the product
/// of edge weights; counts[0] is all ones. Built once per (graph, k) and
/// reused by pivot moves, tail resampling, and the distribution oracles.
struct WalkTable {
  int k = 0;
  std::vector<std::vector<double>> counts;  // counts[j][v], j = 0..k-1
};

WalkTable make_walk_table(const Network& g, int k);

/// Initial state: k iid uniform nodes until they form a valid chain; after
/// 10*n failures, falls back to a uniform edge grown by neighbor steps.
Homomorphism rejection_init(const Network& g, int k, Rng& rng);

struct StepStats {
  bool accepted = true;
};

/// One pivot move: Metropolis step on x(1) along a random-walk proposal, then
/// exact tail resampling x(i) ~ A(x(i-1), w) * N_{k-i}(w). With exact
/// acceptance the chain targets the motif-weighted law pi; with the
/// approximate ratio it targets the pivot-uniform law pi_hat.
void pivot_update(const Network& g, const WalkTable& table, Homomorphism& x, bool exact, Rng& rng,
                  StepStats* stats = nullptr);

/// One heat-bath move: resample a uniformly chosen coordinate from its
/// conditional given the rest; targets pi.
void glauber_update(const Network& g, Homomorphism& x, Rng& rng);

/// One base update according to mode.
void chain_update(const Network& g, const WalkTable& table, Homomorphism& x, McmcMode mode,
                  Rng& rng, StepStats* stats = nullptr);

/// Base updates until the state is injective (at least one update is always
/// applied). Returns the number of non-injective states passed through;
/// throws mixing_error past cfg.max_rejections.
long injective_step(const Network& g, const WalkTable& table, Homomorphism& x,
                    const SamplerConfig& cfg, Rng& rng);

/// Persistent chain over k-walks of a fixed graph. The graph must outlive the
/// sampler. One chain per instance; independent chains should be built with
/// independent rng streams.
class MotifSampler {
public:
  MotifSampler(const Network& g, int k, SamplerConfig cfg, Rng rng);

  const Homomorphism& state() const { return state_; }
  /// Advance one (injective, if configured) step and return the new state.
  const Homomorphism& step();
  /// Replace the chain state; validates the walk (and injectivity if configured).
  void reset(Homomorphism x);

  const WalkTable& walk_table() const { return table_; }
  long steps() const { return steps_; }
  long total_rejections() const { return rejections_; }
  double acceptance_rate() const;

private:
  const Network& g_;
  int k_;
  SamplerConfig cfg_;
  Rng rng_;
  WalkTable table_;
  Homomorphism state_;
  long steps_ = 0;
  long accepts_ = 0;
  long rejections_ = 0;
};

/// All k-walks (optionally injective ones only), depth-first order.
/// Throws capacity_error when the graph admits more than 10^7 walks.
std::vector<Homomorphism> enumerate_homomorphisms(const Network& g, int k, bool injective_only);

enum class TargetKind { pi, pi_inj, pi_hat, pi_hat_inj };

/// Stationary law a chain configuration converges to.
TargetKind target_for(McmcMode mode, bool injective);

/// Exact stationary law by enumeration. pi weights a walk by its edge-weight
/// product; pi_hat additionally divides by |V| * N_{k-1}(x(1)) so the pivot
/// is uniform; *_inj are the renormalized restrictions to injective walks.
std::vector<std::pair<Homomorphism, double>> target_distribution(const Network& g, int k,
                                                                 TargetKind kind);

struct ChainDiag {
  double tv = 0.0;              // empirical occupation vs the exact target
  double acceptance_rate = 1.0;
  long steps = 0;
  std::size_t states = 0;       // size of the target support
};

/// Run a fresh chain for `steps` updates and compare its occupation measure
/// with the exact stationary law of that configuration.
ChainDiag chain_diagnostic(const Network& g, int k, McmcMode mode, bool injective, long steps,
                           std::uint64_t seed);

}  // namespace ndl
