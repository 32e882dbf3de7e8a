#include "ndl/ndr.hpp"

#include <algorithm>
#include <cmath>

#include "ndl/patches.hpp"

namespace ndl {

namespace {

std::uint64_t pair_key(int u, int v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

void check_params(const Network& g, const Dictionary& dict, const NdrParams& p) {
  if (p.k < 2) throw parameter_error("reconstruct: k must be >= 2");
  if (dict.k != p.k) throw parameter_error("reconstruct: dictionary k does not match params.k");
  if (dict.w.rows != p.k * p.k || dict.w.cols != dict.r)
    throw parameter_error("reconstruct: dictionary shape is inconsistent");
  if (p.lambda < 0.0) throw parameter_error("reconstruct: lambda must be >= 0");
  if (!(p.xi >= 0.0 && p.xi <= 1.0)) throw parameter_error("reconstruct: xi must lie in [0,1]");
  if (p.T < 0) throw parameter_error("reconstruct: T must be >= 0");
  if (g.node_count() < 1) throw structure_error("reconstruct: empty graph");
}

/// Coding inputs for one regime: motifs and (per step) patches get the same
/// masking before coding.
struct CodingSetup {
  Mat w;           // masked dictionary, k^2 x r
  bool mask_patch; // whether the patch needs masking too
  double xi;
  bool project;    // hard off-chain projection (denoising regime)
  bool literal;
};

CodingSetup make_setup(const Dictionary& dict, const NdrParams& p) {
  CodingSetup s;
  s.literal = p.literal_offchain;
  s.project = p.denoising;
  s.xi = p.xi;
  if (p.denoising) {
    s.w = off_chain_project_columns(dict.w, p.k, s.literal);
    s.mask_patch = true;
  } else if (p.xi < 1.0) {
    s.w = thin_on_chain_columns(dict.w, p.k, p.xi, s.literal);
    s.mask_patch = true;
  } else {
    s.w = dict.w;
    s.mask_patch = false;
  }
  return s;
}

Mat masked_patch(const Mat& patch, const CodingSetup& s) {
  if (!s.mask_patch) return patch;
  if (s.project) return off_chain_project(patch, s.literal);
  return thin_on_chain(patch, s.xi, s.literal);
}

/// True at slot pairs the denoising regime must skip (positive chain entries).
bool on_chain_slot(int a, int b, bool literal) {
  if (b == a + 1) return true;
  if (!literal && a == b + 1) return true;
  return false;
}

/// The k x k patch column-stacked into the k^2 x 1 coding input.
Mat as_column(const Mat& m) {
  Mat out = m;
  out.rows = m.rows * m.cols;
  out.cols = 1;
  return out;
}

}  // namespace

void ReconstructionAccumulator::add(int u, int v, double value) {
  Cell& c = cells_[pair_key(u, v)];
  c.count += 1;
  c.mean += (value - c.mean) / static_cast<double>(c.count);
}

long ReconstructionAccumulator::count(int u, int v) const {
  auto it = cells_.find(pair_key(u, v));
  return it == cells_.end() ? 0 : it->second.count;
}

double ReconstructionAccumulator::mean(int u, int v) const {
  auto it = cells_.find(pair_key(u, v));
  return it == cells_.end() ? 0.0 : it->second.mean;
}

void ReconstructionAccumulator::merge(const ReconstructionAccumulator& o) {
  for (const auto& [key, oc] : o.cells_) {
    Cell& c = cells_[key];
    long total = c.count + oc.count;
    if (total == 0) continue;
    c.mean = (c.mean * static_cast<double>(c.count) +
              oc.mean * static_cast<double>(oc.count)) /
             static_cast<double>(total);
    c.count = total;
  }
}

std::vector<std::pair<std::uint64_t, ReconstructionAccumulator::Cell>>
ReconstructionAccumulator::sorted_cells() const {
  std::vector<std::pair<std::uint64_t, Cell>> cells(cells_.begin(), cells_.end());
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return cells;
}

std::vector<std::tuple<int, int, long, double>> ReconstructionAccumulator::entries() const {
  std::vector<std::tuple<int, int, long, double>> out;
  out.reserve(cells_.size());
  for (const auto& [key, c] : sorted_cells())
    out.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), c.count,
                     c.mean);
  return out;
}

long default_recon_steps(int n) {
  if (n < 1) throw parameter_error("default_recon_steps: n must be >= 1");
  long t = static_cast<long>(std::floor(n * std::log(static_cast<double>(n))));
  return std::max(t, 1L);
}

namespace {

/// One sampling pass; when force_class >= 0 the chain is re-initialized until
/// its head lies in that parity class.
ReconstructionAccumulator run_pass(const Network& g, const NdrParams& params,
                                   const CodingSetup& setup, long steps, Rng rng, int force_class,
                                   const std::vector<int>& classes) {
  SamplerConfig cfg;
  cfg.mode = params.mode;
  cfg.injective = params.inj_hom;
  cfg.max_rejections = params.max_rejections;
  MotifSampler sampler(g, params.k, cfg, rng.split(1));
  if (force_class >= 0) {
    Rng init_rng = rng.split(2);
    bool placed = false;
    for (long attempt = 0; attempt < 100'000; ++attempt) {
      Homomorphism x = rejection_init(g, params.k, init_rng);
      if (classes[x.nodes[0]] != force_class) continue;
      if (params.inj_hom && !x.injective()) continue;
      sampler.reset(std::move(x));
      placed = true;
      break;
    }
    if (!placed)
      throw mixing_error("could not initialize a chain in the requested parity class");
  }
  int k = params.k;
  ReconstructionAccumulator acc;
  for (long t = 0; t < steps; ++t) {
    const Homomorphism& h = sampler.step();
    Mat patch = extract_patch(g, h);
    Mat coded = masked_patch(patch, setup);
    Mat code = sparse_code(as_column(coded), setup.w, params.lambda, params.code_iters,
                           params.code_tol);
    Mat ahat_vec = matmul(setup.w, code);
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a) {
        if (params.denoising && on_chain_slot(a, b, setup.literal)) continue;
        acc.add(h.nodes[a], h.nodes[b], ahat_vec.a[static_cast<std::size_t>(b) * k + a]);
      }
  }
  return acc;
}

}  // namespace

ReconstructionResult reconstruct(const Network& g, const Dictionary& dict,
                                 const NdrParams& params) {
  check_params(g, dict, params);
  long steps = params.T > 0 ? params.T : default_recon_steps(g.node_count());
  CodingSetup setup = make_setup(dict, params);
  Rng root(params.seed, 0x6e6472);

  std::vector<int> classes = g.bipartite_classes();
  bool two_pass = !classes.empty() && params.k % 2 == 1;

  ReconstructionResult res;
  res.steps_per_pass = steps;
  if (!two_pass) {
    res.passes.push_back(run_pass(g, params, setup, steps, root.split(10), -1, classes));
  } else {
    ReconstructionAccumulator first =
        run_pass(g, params, setup, steps, root.split(10), 0, classes);
    ReconstructionAccumulator second =
        run_pass(g, params, setup, steps, root.split(11), 1, classes);
    res.passes.push_back(std::move(first));
    res.passes.push_back(std::move(second));
  }

  Network out(g.node_count(), g.labels());
  if (res.passes.size() == 1) {
    for (const auto& [u, v, count, mean] : res.passes[0].entries())
      if (mean > 0.0) out.set_weight(u, v, mean);
  } else {
    // Entrywise average of the two pass means; a pair missing from one pass
    // contributes 0 there.
    std::unordered_map<std::uint64_t, double> sums;
    for (const auto& acc : res.passes)
      for (const auto& [u, v, count, mean] : acc.entries()) sums[pair_key(u, v)] += mean;
    std::vector<std::pair<std::uint64_t, double>> cells(sums.begin(), sums.end());
    std::sort(cells.begin(), cells.end());
    for (const auto& [key, sum] : cells) {
      double avg = sum / 2.0;
      if (avg > 0.0)
        out.set_weight(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), avg);
    }
  }
  res.weights = std::move(out);
  return res;
}

Network threshold(const Network& weights, double theta) {
  if (!(theta >= 0.0)) throw parameter_error("threshold: theta must be >= 0");
  Network out(weights.node_count(), weights.labels());
  for (auto [u, v] : weights.edge_pairs())
    if (weights.weight(u, v) > theta) out.set_weight(u, v, 1.0);
  return out;
}

JaccardMetrics jaccard_metrics(const Network& a, const Network& b) {
  if (a.node_count() != b.node_count())
    throw parameter_error("jaccard_metrics: node counts differ");
  auto validate = [](const Network& g, const char* name) {
    for (auto [u, v] : g.edge_pairs()) {
      if (u == v) throw parameter_error(std::string("jaccard_metrics: ") + name +
                                        " must not contain self-edges");
      if (g.weight(u, v) != 1.0)
        throw parameter_error(std::string("jaccard_metrics: ") + name +
                              " must be binary (weight-1 edges)");
    }
  };
  validate(a, "first graph");
  validate(b, "second graph");
  std::size_t inter = 0;
  for (auto [u, v] : a.edge_pairs())
    if (b.has_edge(u, v)) ++inter;
  std::size_t uni = a.edge_count() + b.edge_count() - inter;
  if (uni == 0) throw metric_error("jaccard_metrics: both graphs are empty");
  JaccardMetrics m;
  m.index = static_cast<double>(inter) / static_cast<double>(uni);
  m.distance = 1.0 - m.index;
  return m;
}

double weighted_jaccard_distance(const Network& a, const Network& b,
                                 const std::vector<PairWeight>& weights) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& pw : weights) {
    double wa = a.weight(pw.u, pw.v);
    double wb = b.weight(pw.u, pw.v);
    num += pw.w * std::abs(wa - wb);
    den += pw.w * std::max(wa, wb);
  }
  if (!(den > 0.0))
    throw metric_error("weighted_jaccard_distance: weighted union has zero mass");
  return num / den;
}

LimitingReconstruction limiting_reconstruction(const Network& g, const Dictionary& dict,
                                               const NdrParams& params) {
  check_params(g, dict, params);
  CodingSetup setup = make_setup(dict, params);
  auto law = target_distribution(g, params.k, target_for(params.mode, params.inj_hom));
  int k = params.k;
  struct Agg {
    double wsum = 0.0;
    double vsum = 0.0;
  };
  std::unordered_map<std::uint64_t, Agg> cells;
  for (const auto& [h, p] : law) {
    Mat patch = extract_patch(g, h);
    Mat coded = masked_patch(patch, setup);
    Mat code = sparse_code(as_column(coded), setup.w, params.lambda, params.code_iters,
                           params.code_tol);
    Mat ahat_vec = matmul(setup.w, code);
    for (int b = 0; b < k; ++b)
      for (int a = 0; a < k; ++a) {
        if (params.denoising && on_chain_slot(a, b, setup.literal)) continue;
        Agg& cell = cells[pair_key(h.nodes[a], h.nodes[b])];
        cell.wsum += p;
        cell.vsum += p * ahat_vec.a[static_cast<std::size_t>(b) * k + a];
      }
  }
  LimitingReconstruction out;
  out.weights = Network(g.node_count(), g.labels());
  std::vector<std::pair<std::uint64_t, Agg>> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  out.cells.reserve(sorted.size());
  for (const auto& [key, cell] : sorted) {
    int u = static_cast<int>(key >> 32);
    int v = static_cast<int>(key & 0xffffffffu);
    double mean = cell.wsum > 0.0 ? cell.vsum / cell.wsum : 0.0;
    out.cells.emplace_back(u, v, cell.wsum, mean);
    if (mean > 0.0) out.weights.set_weight(u, v, mean);
  }
  return out;
}

MesoscaleError mesoscale_error(const Network& g, const Dictionary& dict, const NdrParams& params,
                               long samples) {
  check_params(g, dict, params);
  if (samples < 2) throw parameter_error("mesoscale_error: need at least 2 samples");
  SamplerConfig cfg;
  cfg.mode = params.mode;
  cfg.injective = true;
  cfg.max_rejections = params.max_rejections;
  MotifSampler sampler(g, params.k, cfg, Rng(params.seed, 0x6d65736f));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long s = 0; s < samples; ++s) {
    const Homomorphism& h = sampler.step();
    Mat patch = extract_patch(g, h);
    Mat code = sparse_code(as_column(patch), dict.w, params.lambda, params.code_iters,
                           params.code_tol);
    Mat ahat = matmul(dict.w, code);
    double err = 0.0;
    for (std::size_t i = 0; i < patch.a.size(); ++i) err += std::abs(patch.a[i] - ahat.a[i]);
    sum += err;
    sum_sq += err * err;
  }
  MesoscaleError out;
  out.samples = samples;
  out.mean = sum / static_cast<double>(samples);
  double var = std::max(0.0, sum_sq / samples - out.mean * out.mean);
  out.std_err = std::sqrt(var / static_cast<double>(samples));
  return out;
}

BoundReport bound_report(const Network& g, const Dictionary& dict, const NdrParams& params,
                         long fallback_T, long fallback_samples) {
  if (params.denoising)
    throw parameter_error("bound_report: stated for the plain regime (denoising off)");
  BoundReport rep;
  int k = params.k;
  double scale = 2.0 * (k - 1);
  try {
    LimitingReconstruction lim = limiting_reconstruction(g, dict, params);
    std::vector<PairWeight> weights;
    weights.reserve(lim.cells.size());
    for (const auto& [u, v, w, mean] : lim.cells) weights.push_back({u, v, w});
    rep.lhs = weighted_jaccard_distance(g, lim.weights, weights);
    // Exact expected patch error under the same stationary law.
    auto law = target_distribution(g, k, target_for(params.mode, params.inj_hom));
    double expected = 0.0;
    CodingSetup setup = make_setup(dict, params);
    for (const auto& [h, p] : law) {
      Mat patch = extract_patch(g, h);
      Mat coded = masked_patch(patch, setup);
      Mat code = sparse_code(as_column(coded), setup.w, params.lambda, params.code_iters,
                             params.code_tol);
      Mat ahat = matmul(setup.w, code);
      double err = 0.0;
      for (std::size_t i = 0; i < patch.a.size(); ++i) err += std::abs(patch.a[i] - ahat.a[i]);
      expected += p * err;
    }
    rep.rhs = expected / scale;
    rep.exact = true;
  } catch (const capacity_error&) {
    // Too large to enumerate: long finite pass with empirical visit weights.
    NdrParams run = params;
    run.T = fallback_T;
    ReconstructionResult rec = reconstruct(g, dict, run);
    ReconstructionAccumulator all;
    for (const auto& acc : rec.passes) all.merge(acc);
    std::vector<PairWeight> weights;
    Network means(g.node_count(), g.labels());
    for (const auto& [u, v, count, mean] : all.entries()) {
      weights.push_back({u, v, static_cast<double>(count)});
      if (mean > 0.0) means.set_weight(u, v, mean);
    }
    rep.lhs = weighted_jaccard_distance(g, means, weights);
    rep.mesoscale = mesoscale_error(g, dict, params, fallback_samples);
    rep.rhs = rep.mesoscale.mean / scale;
    rep.exact = false;
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs + 1e-9;
  return rep;
}

}  // namespace ndl
