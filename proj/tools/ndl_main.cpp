// Command-line front end: generate, corrupt, learn, motifs, reconstruct,
// denoise, mcmc-diag, eval, version.  User/data errors exit 1, internal
// errors exit 2, success exits 0.
#include <CLI11.hpp>

#include <ndl/denoise.hpp>
#include <ndl/errors.hpp>
#include <ndl/graph.hpp>
#include <ndl/ndl.hpp>
#include <ndl/ndr.hpp>
#include <ndl/patches.hpp>
#include <ndl/sampling.hpp>
#include <ndl/version.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ndl;

namespace {

/// Seed precedence: --seed flag beats NDL_SEED env beats 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NDL_SEED")) {
    std::string s(env);
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw parameter_error("NDL_SEED is not an unsigned integer: " + s);
    return v;
  }
  return 0;
}

McmcMode parse_mode(const std::string& s) {
  if (s == "pivot" || s == "pivotexact") return McmcMode::PivotExact;
  if (s == "pivotapprox") return McmcMode::PivotApprox;
  if (s == "glauber") return McmcMode::Glauber;
  throw parameter_error("--mcmc/--mode must be pivot, pivotapprox, or glauber (got " + s + ")");
}

/// Step counts accept scientific notation ("1e6") as well as plain integers.
long parse_steps(const std::string& s, const char* flag) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !(v > 0) ||
      v != std::floor(v) || v > 9e18)
    throw parameter_error(std::string(flag) + " must be a positive whole number (got " + s + ")");
  return static_cast<long>(v);
}

std::string fmt(double v) { return format_double(v); }

/// TSV with a header line and any number of value rows.
std::string tsv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += cells[i];
      out += (i + 1 < cells.size()) ? '\t' : '\n';
    }
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

// ---- generate ----

struct GenerateArgs {
  std::string model;
  int n = 0;
  double p = 0;
  int k = 0;
  int n0 = 0;
  std::vector<int> sizes;
  std::vector<double> block_p;
  std::string out;
};

void run_generate(const GenerateArgs& a, std::uint64_t seed) {
  ModelSpec spec;
  if (a.model == "er") {
    spec = ModelSpec::er(a.n, a.p);
  } else if (a.model == "ws") {
    spec = ModelSpec::ws(a.n, a.k, a.p);
  } else if (a.model == "ba") {
    spec = ModelSpec::ba(a.n, a.n0);
  } else if (a.model == "sbm") {
    int b = static_cast<int>(a.sizes.size());
    if (b == 0) throw parameter_error("--sizes is required for --model sbm");
    if (static_cast<int>(a.block_p.size()) != b * b)
      throw parameter_error("--block-p must list " + std::to_string(b * b) +
                            " row-major entries for " + std::to_string(b) + " blocks");
    std::vector<std::vector<double>> probs(b, std::vector<double>(b));
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j) probs[i][j] = a.block_p[i * b + j];
    spec = ModelSpec::sbm(a.sizes, probs);
  } else {
    throw parameter_error("--model must be er, ws, ba, or sbm (got " + a.model + ")");
  }
  Network g = generate(spec, seed);
  save_edge_list(g, a.out);
  std::cerr << "generated " << g.node_count() << " nodes, " << g.edge_count()
            << " edges -> " << a.out << "\n";
}

// ---- corrupt ----

struct CorruptArgs {
  std::string graph;
  std::string noise;
  double fraction = 0.5;
  int ws_n0 = 100;
  int ws_k0 = 20;
  double ws_p = 0.3;
  std::string out;
  std::string changed;
};

void run_corrupt(const CorruptArgs& a, std::uint64_t seed) {
  Network g = load_edge_list(a.graph);
  NoiseSpec spec;
  if (a.noise == "-er" || a.noise == "sub-er" || a.noise == "subtractive")
    spec = NoiseSpec::subtractive_er(a.fraction);
  else if (a.noise == "+er" || a.noise == "add-er" || a.noise == "additive")
    spec = NoiseSpec::additive_er(a.fraction);
  else if (a.noise == "+ws" || a.noise == "add-ws")
    spec = NoiseSpec::additive_ws(a.ws_n0, a.ws_k0, a.ws_p);
  else
    throw parameter_error("--noise must be -er, +er, or +ws (got " + a.noise + ")");
  CorruptionResult res = corrupt(g, spec, seed);
  save_edge_list(res.graph, a.out);
  std::string tsv = "u\tv\tlabel\n";
  for (const auto& c : res.changed) {
    tsv += res.graph.label(c.u);
    tsv += '\t';
    tsv += res.graph.label(c.v);
    tsv += '\t';
    tsv += (c.label == PairLabel::true_edge) ? "true_edge" : "false_edge";
    tsv += '\n';
  }
  atomic_write_file(a.changed, tsv);
  std::cerr << "corrupted: " << res.changed.size() << " pairs changed -> "
            << a.out << ", " << a.changed << "\n";
}

// ---- learn ----

struct LearnArgs {
  std::string graph;
  NdlParams params;
  std::string mcmc = "pivotapprox";
  std::string out;
  std::string trace;
};

void run_learn(const LearnArgs& a, std::uint64_t seed, bool verbose) {
  Network g = load_edge_list(a.graph);
  NdlParams p = a.params;
  p.mode = parse_mode(a.mcmc);
  p.seed = seed;
  LearnResult res = learn_dictionary(g, p);
  save_dictionary(res.dictionary, a.out);
  if (!a.trace.empty()) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(res.trace.size());
    for (const auto& d : res.trace)
      rows.push_back({std::to_string(d.t), fmt(d.fit_rel), std::to_string(d.rejections)});
    atomic_write_file(a.trace, tsv_table({"t", "fit_rel", "rejections"}, rows));
  }
  if (verbose && !res.trace.empty())
    std::cerr << "final minibatch fit_rel = " << fmt(res.trace.back().fit_rel) << "\n";
  std::cerr << "learned dictionary k=" << p.k << " r=" << p.r << " -> " << a.out << "\n";
}

// ---- motifs ----

struct MotifsArgs {
  std::string dict;
  std::string out_dir;
};

/// Grayscale PGM (P2) of one k-by-k motif, scaled so the largest entry is 255.
std::string motif_pgm(const Mat& m) {
  double mx = max_abs(m);
  std::string out = "P2\n" + std::to_string(m.cols) + " " + std::to_string(m.rows) + "\n255\n";
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      int pix = mx > 0 ? static_cast<int>(std::lround(m(i, j) * 255.0 / mx)) : 0;
      out += std::to_string(pix);
      out += (j + 1 < m.cols) ? ' ' : '\n';
    }
  }
  return out;
}

void run_motifs(const MotifsArgs& a) {
  Dictionary dict = load_dictionary(a.dict);
  // The file stores only the motifs, so prominence is read from the column
  // norms (the learned aggregates are not persisted).
  std::vector<double> score(dict.r);
  std::vector<int> order(dict.r);
  for (int j = 0; j < dict.r; ++j) {
    score[j] = col_norm(dict.w, j);
    order[j] = j;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return score[x] > score[y]; });
  fs::create_directories(a.out_dir);
  for (int rank = 0; rank < dict.r; ++rank) {
    int j = order[rank];
    Mat m = reshape(std::vector<double>(dict.w.col(j), dict.w.col(j) + dict.k * dict.k),
                    dict.k, dict.k);
    char tag[32];
    std::snprintf(tag, sizeof tag, "%.4f", score[j]);
    std::string name = "motif_" + std::to_string(rank + 1) + "_" + tag + ".pgm";
    atomic_write_file(fs::path(a.out_dir) / name, motif_pgm(m));
  }
  std::cerr << "wrote " << dict.r << " motif images -> " << a.out_dir << "\n";
}

// ---- reconstruct ----

struct ReconstructArgs {
  std::string graph;
  std::string dict;
  std::string t_steps = "auto";
  NdrParams params;
  std::string mcmc = "pivotapprox";
  std::string out;
  std::string report;
};

void run_reconstruct(const ReconstructArgs& a, std::uint64_t seed) {
  Network g = load_edge_list(a.graph);
  Dictionary dict = load_dictionary(a.dict);

  NdrParams p = a.params;
  p.k = dict.k;
  p.mode = parse_mode(a.mcmc);
  p.seed = seed;
  p.T = (a.t_steps == "auto") ? 0 : parse_steps(a.t_steps, "--T");

  ReconstructionResult res = reconstruct(g, dict, p);
  save_edge_list(res.weights, a.out);

  if (!a.report.empty()) {
    std::string ji = "nan", jd = "nan";
    try {
      JaccardMetrics m = jaccard_metrics(threshold(res.weights, p.theta), g);
      ji = fmt(m.index);
      jd = fmt(m.distance);
    } catch (const error& e) {
      std::cerr << "note: jaccard metrics unavailable: " << e.what() << "\n";
    }
    MesoscaleError me = mesoscale_error(g, dict, p, 2000);
    // Long-run check from this very run: pair visit counts weight the
    // reconstruction error against the sampled patch error.
    std::string lhs = "nan", rhs = "nan";
    if (!p.denoising) {
      ReconstructionAccumulator acc = res.passes.front();
      for (std::size_t i = 1; i < res.passes.size(); ++i) acc.merge(res.passes[i]);
      std::vector<PairWeight> pw;
      for (const auto& [u, v, count, mean] : acc.entries())
        pw.push_back({u, v, static_cast<double>(count)});
      try {
        lhs = fmt(weighted_jaccard_distance(g, res.weights, pw));
        rhs = fmt(me.mean / (2.0 * (p.k - 1)));
      } catch (const error& e) {
        std::cerr << "note: bound estimate unavailable: " << e.what() << "\n";
      }
    }
    atomic_write_file(
        a.report,
        tsv_table({"jaccard_index", "jaccard_distance", "mesoscale_error", "bound_lhs",
                   "bound_rhs"},
                  {{ji, jd, fmt(me.mean), lhs, rhs}}));
  }
  std::cerr << "reconstructed " << res.weights.edge_count() << " weighted pairs over "
            << res.passes.size() << " pass(es), " << res.steps_per_pass
            << " steps each -> " << a.out << "\n";
}

// ---- denoise ----

struct DenoiseArgs {
  std::string graph;
  std::string labels;
  NdlParams ndl_params;
  std::string recon_T = "auto";
  double recon_lambda = 0;
  double xi = 0;
  bool denoising = false;
  bool injective = false;
  bool all_nonedges = false;
  bool literal_offchain = false;
  std::string mcmc = "pivotapprox";
  double train_frac = 0.25;
  double val_frac = 0.25;
  std::string report;
  std::string scores;
};

struct LabelledPairs {
  std::vector<ChangedPair> changed;
  NoiseSpec::Kind kind;
};

/// Reads a changed-pairs TSV (u, v, label); node names resolve against g.
LabelledPairs load_changed(const std::string& path, const Network& g) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open labels file: " + path);
  std::map<std::string, int> ids;
  for (int v = 0; v < g.node_count(); ++v) ids[g.label(v)] = v;
  LabelledPairs out{{}, NoiseSpec::Kind::AdditiveER};
  bool any_true = false, any_false = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string u, v, lab;
    if (!(ls >> u)) continue;  // blank line
    if (!(ls >> v >> lab))
      throw parse_error("labels line " + std::to_string(line_no) + ": expected u v label");
    if (line_no == 1 && lab == "label") continue;  // header row
    auto iu = ids.find(u), iv = ids.find(v);
    if (iu == ids.end() || iv == ids.end())
      throw parse_error("labels line " + std::to_string(line_no) +
                        ": node not present in graph");
    PairLabel pl;
    if (lab == "true_edge") {
      pl = PairLabel::true_edge;
      any_true = true;
    } else if (lab == "false_edge") {
      pl = PairLabel::false_edge;
      any_false = true;
    } else {
      throw parse_error("labels line " + std::to_string(line_no) +
                        ": label must be true_edge or false_edge");
    }
    int a = std::min(iu->second, iv->second), b = std::max(iu->second, iv->second);
    out.changed.push_back({a, b, pl});
  }
  if (out.changed.empty()) throw parameter_error("labels file lists no changed pairs");
  if (any_true && any_false)
    throw parameter_error("labels file mixes true_edge and false_edge rows");
  out.kind = any_true ? NoiseSpec::Kind::SubtractiveER : NoiseSpec::Kind::AdditiveER;
  return out;
}

void run_denoise(const DenoiseArgs& a, std::uint64_t seed) {
  Network g = load_edge_list(a.graph);
  LabelledPairs lp = load_changed(a.labels, g);

  NdlParams ndl_p = a.ndl_params;
  ndl_p.mode = parse_mode(a.mcmc);
  ndl_p.seed = seed;
  NdrParams ndr_p;
  ndr_p.k = ndl_p.k;
  ndr_p.T = (a.recon_T == "auto") ? 0 : parse_steps(a.recon_T, "--recon-T");
  ndr_p.lambda = a.recon_lambda;
  ndr_p.xi = a.xi;
  ndr_p.denoising = a.denoising;
  ndr_p.inj_hom = a.injective;
  ndr_p.literal_offchain = a.literal_offchain;
  ndr_p.mode = ndl_p.mode;
  ndr_p.seed = seed;
  ndr_p.max_rejections = ndl_p.max_rejections;

  DenoiseResult res =
      denoise_pipeline(g, lp.changed, lp.kind, ndl_p, ndr_p, a.all_nonedges);

  std::vector<std::vector<std::string>> rows;
  auto add_row = [&](const std::string& name, const std::vector<ScoredPair>& sp) {
    RocCurve roc = roc_auc(sp);
    SplitEval ev = classify_with_split(sp, seed, a.train_frac, a.val_frac);
    rows.push_back({name, fmt(roc.auc), fmt(ev.accuracy), fmt(ev.precision), fmt(ev.recall),
                    fmt(ev.theta)});
  };
  add_row("ndr", res.scores);
  auto add_baseline = [&](const std::string& name, BaselineMethod m) {
    try {
      add_row(name, baseline_scores(g, res.scores, m));
    } catch (const method_unavailable_error& e) {
      std::cerr << "note: " << name << " skipped: " << e.what() << "\n";
    }
  };
  add_baseline("jaccard", BaselineMethod::JaccardIndex);
  add_baseline("preferential_attachment", BaselineMethod::PreferentialAttachment);
  add_baseline("adamic_adar", BaselineMethod::AdamicAdar);

  atomic_write_file(a.report, tsv_table(
      {"method", "auc", "accuracy", "precision", "recall", "theta"}, rows));
  if (!a.scores.empty()) {
    std::vector<std::vector<std::string>> srows;
    srows.reserve(res.scores.size());
    for (const auto& s : res.scores)
      srows.push_back({g.label(s.u), g.label(s.v), fmt(s.score), s.positive ? "1" : "0"});
    atomic_write_file(a.scores, tsv_table({"u", "v", "score", "positive"}, srows));
  }
  std::cerr << "denoise report (" << res.scores.size() << " candidate pairs) -> "
            << a.report << "\n";
}

// ---- mcmc-diag ----

struct McmcDiagArgs {
  std::string graph;
  int k = 3;
  std::string mode = "pivotapprox";
  std::string steps = "100000";
  bool injective = false;
  bool oracle = false;
  std::string out;
};

void run_mcmc_diag(const McmcDiagArgs& a, std::uint64_t seed) {
  Network g = load_edge_list(a.graph);
  McmcMode mode = parse_mode(a.mode);
  long steps = parse_steps(a.steps, "--steps");
  std::vector<std::string> header = {"mode", "injective", "k", "steps", "acceptance_rate"};
  std::vector<std::string> row = {a.mode, a.injective ? "1" : "0",
                                  std::to_string(a.k), std::to_string(steps)};
  if (a.oracle) {
    ChainDiag d = chain_diagnostic(g, a.k, mode, a.injective, steps, seed);
    row.push_back(fmt(d.acceptance_rate));
    header.push_back("tv");
    row.push_back(fmt(d.tv));
    header.push_back("states");
    row.push_back(std::to_string(d.states));
  } else {
    SamplerConfig cfg;
    cfg.mode = mode;
    cfg.injective = a.injective;
    MotifSampler sampler(g, a.k, cfg, Rng(seed, 0x6d636d63));
    for (long t = 0; t < steps; ++t) sampler.step();
    row.push_back(fmt(sampler.acceptance_rate()));
  }
  std::string tsv = tsv_table(header, {row});
  if (a.out.empty())
    std::cout << tsv;
  else
    atomic_write_file(a.out, tsv);
}

// ---- eval ----

struct EvalArgs {
  std::string graph_a;
  std::string graph_b;
  std::string report;
};

/// Rebuilds b over a's node ids so edge sets compare label-to-label.
Network align_to(const Network& a, const Network& b) {
  if (a.node_count() != b.node_count())
    throw parameter_error("graphs have different node counts: " +
                          std::to_string(a.node_count()) + " vs " +
                          std::to_string(b.node_count()));
  std::map<std::string, int> ids;
  for (int v = 0; v < a.node_count(); ++v) ids[a.label(v)] = v;
  Network out(a.node_count(), a.labels());
  for (const auto& [u, v] : b.edge_pairs()) {
    auto iu = ids.find(b.label(u)), iv = ids.find(b.label(v));
    if (iu == ids.end() || iv == ids.end())
      throw parameter_error("node " + b.label(u) + "/" + b.label(v) +
                            " missing from first graph");
    out.set_weight(iu->second, iv->second, b.weight(u, v));
  }
  return out;
}

std::string degree_hist_tsv(const Network& g) {
  std::vector<std::vector<std::string>> rows;
  const auto& hist = structural_stats(g).degree_histogram;
  for (std::size_t d = 0; d < hist.size(); ++d)
    if (hist[d] > 0) rows.push_back({std::to_string(d), std::to_string(hist[d])});
  return tsv_table({"degree", "count"}, rows);
}

void run_eval(const EvalArgs& a) {
  Network ga = load_edge_list(a.graph_a);
  Network gb = align_to(ga, load_edge_list(a.graph_b));
  JaccardMetrics m = jaccard_metrics(ga, gb);
  StructuralStats sa = structural_stats(ga);
  StructuralStats sb = structural_stats(gb);
  atomic_write_file(a.report, tsv_table(
      {"jaccard_index", "jaccard_distance", "mean_clustering_a", "mean_clustering_b",
       "diameter_a", "diameter_b"},
      {{fmt(m.index), fmt(m.distance), fmt(sa.mean_clustering), fmt(sb.mean_clustering),
        std::to_string(sa.diameter), std::to_string(sb.diameter)}}));
  fs::path rp(a.report);
  fs::path stem = rp.parent_path() / rp.stem();
  atomic_write_file(stem.string() + "_degree_a.tsv", degree_hist_tsv(ga));
  atomic_write_file(stem.string() + "_degree_b.tsv", degree_hist_tsv(gb));
  std::cerr << "eval report -> " << a.report << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network dictionary learning: sample motifs, learn dictionaries, "
               "reconstruct and denoise networks"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed_flag;
  int threads = 1;
  bool verbose = false;
  app.add_option("--seed", seed_flag, "random seed (overrides NDL_SEED; default 0)");
  app.add_option("--threads", threads, "worker threads (only 1 is used)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "extra progress output on stderr");

  GenerateArgs gen;
  auto* cg = app.add_subcommand("generate", "sample a synthetic network");
  cg->add_option("--model", gen.model, "er, ws, ba, or sbm")->required();
  cg->add_option("--n", gen.n, "node count");
  cg->add_option("--p", gen.p, "edge/rewiring probability");
  cg->add_option("--k", gen.k, "ring neighbor count, even (ws)");
  cg->add_option("--n0", gen.n0, "seed/attachment count (ba)");
  cg->add_option("--sizes", gen.sizes, "block sizes (sbm)");
  cg->add_option("--block-p", gen.block_p, "row-major block probabilities (sbm)");
  cg->add_option("-o,--output", gen.out, "edge list output path")->required();

  CorruptArgs cor;
  auto* cc = app.add_subcommand("corrupt", "add or remove edges at random");
  cc->add_option("--graph", cor.graph, "input edge list")->required();
  cc->add_option("--noise", cor.noise, "-er, +er, or +ws")->required();
  cc->add_option("--fraction", cor.fraction, "fraction of edges to change (er noise)");
  cc->add_option("--ws-n0", cor.ws_n0, "overlay node count (+ws)");
  cc->add_option("--ws-k0", cor.ws_k0, "overlay neighbor count, even (+ws)");
  cc->add_option("--ws-p", cor.ws_p, "overlay rewiring probability (+ws)");
  cc->add_option("-o,--output", cor.out, "corrupted edge list output")->required();
  cc->add_option("--changed", cor.changed, "changed-pairs TSV output")->required();

  LearnArgs lrn;
  auto* cl = app.add_subcommand("learn", "learn a latent motif dictionary");
  cl->add_option("--graph", lrn.graph, "input edge list")->required();
  cl->add_option("--k", lrn.params.k, "chain length (patches are k x k)");
  cl->add_option("--r", lrn.params.r, "number of motifs");
  cl->add_option("--T", lrn.params.T, "minibatch rounds");
  cl->add_option("--N", lrn.params.N, "walks per minibatch");
  cl->add_option("--lambda", lrn.params.lambda, "sparse coding penalty");
  cl->add_option("--mcmc", lrn.mcmc, "pivot, pivotapprox, or glauber");
  cl->add_option("--max-rejections", lrn.params.max_rejections,
                 "injectivity rejection budget");
  cl->add_option("-o,--output", lrn.out, "dictionary output path")->required();
  cl->add_option("--trace", lrn.trace, "per-round fit TSV output");

  MotifsArgs mot;
  auto* cm = app.add_subcommand("motifs", "export dictionary atoms as PGM images");
  cm->add_option("--dict", mot.dict, "dictionary file")->required();
  cm->add_option("-o,--output", mot.out_dir, "output directory")->required();

  ReconstructArgs rec;
  auto* cr = app.add_subcommand("reconstruct", "rebuild a network from its dictionary");
  cr->add_option("--graph", rec.graph, "input edge list")->required();
  cr->add_option("--dict", rec.dict, "dictionary file")->required();
  cr->add_option("--T", rec.t_steps, "steps per pass, or auto");
  cr->add_option("--lambda", rec.params.lambda, "sparse coding penalty");
  cr->add_option("--theta", rec.params.theta, "edge threshold for the report metrics");
  cr->add_option("--xi", rec.params.xi, "on-chain damping factor in [0,1]");
  cr->add_flag("--denoising", rec.params.denoising, "mask on-chain entries entirely");
  cr->add_flag("--injective", rec.params.inj_hom, "restrict chains to injective ones");
  cr->add_flag("--literal-offchain", rec.params.literal_offchain,
               "mask only one triangle of the on-chain entries");
  cr->add_option("--mcmc", rec.mcmc, "pivot, pivotapprox, or glauber");
  cr->add_option("-o,--output", rec.out, "weighted edge list output")->required();
  cr->add_option("--report", rec.report, "metrics TSV output");

  DenoiseArgs den;
  auto* cd = app.add_subcommand("denoise", "score candidate pairs against corruption");
  cd->add_option("--graph", den.graph, "corrupted edge list")->required();
  cd->add_option("--labels", den.labels, "changed-pairs TSV from corrupt")->required();
  cd->add_option("--k", den.ndl_params.k, "chain length");
  cd->add_option("--r", den.ndl_params.r, "number of motifs");
  cd->add_option("--T", den.ndl_params.T, "learning minibatch rounds");
  cd->add_option("--N", den.ndl_params.N, "walks per minibatch");
  cd->add_option("--lambda", den.ndl_params.lambda, "learning sparsity penalty");
  cd->add_option("--recon-T", den.recon_T, "reconstruction steps per pass, or auto");
  cd->add_option("--recon-lambda", den.recon_lambda, "reconstruction coding penalty");
  cd->add_option("--xi", den.xi, "on-chain damping factor in [0,1]");
  cd->add_flag("--denoising", den.denoising, "mask on-chain entries entirely");
  cd->add_flag("--injective", den.injective, "restrict chains to injective ones");
  cd->add_flag("--all-nonedges", den.all_nonedges,
               "score every non-adjacent pair (subtractive noise)");
  cd->add_flag("--literal-offchain", den.literal_offchain,
               "mask only one triangle of the on-chain entries");
  cd->add_option("--mcmc", den.mcmc, "pivot, pivotapprox, or glauber");
  cd->add_option("--train-frac", den.train_frac, "train split fraction");
  cd->add_option("--val-frac", den.val_frac, "validation split fraction");
  cd->add_option("--report", den.report, "metrics TSV output")->required();
  cd->add_option("--scores", den.scores, "per-pair score TSV output");

  McmcDiagArgs diag;
  auto* cdg = app.add_subcommand("mcmc-diag", "chain acceptance and mixing diagnostics");
  cdg->add_option("--graph", diag.graph, "input edge list")->required();
  cdg->add_option("--k", diag.k, "chain length");
  cdg->add_option("--mode", diag.mode, "pivot, pivotapprox, or glauber");
  cdg->add_option("--steps", diag.steps, "chain updates to run (accepts 1e6)");
  cdg->add_flag("--injective", diag.injective, "restrict chains to injective ones");
  cdg->add_flag("--oracle", diag.oracle,
                "compare occupation with the exact stationary law (small graphs)");
  cdg->add_option("-o,--output", diag.out, "TSV output path (default stdout)");

  EvalArgs ev;
  auto* ce = app.add_subcommand("eval", "compare two networks on shared node labels");
  ce->add_option("--graph-a", ev.graph_a, "first edge list")->required();
  ce->add_option("--graph-b", ev.graph_b, "second edge list")->required();
  ce->add_option("-o,--output", ev.report, "report TSV output")->required();

  auto* cv = app.add_subcommand("version", "print the tool version");

  // Global flags (--seed, --threads, --verbose) are accepted after the
  // subcommand name as well.
  for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; }))
    sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::uint64_t seed = resolve_seed(seed_flag);
    if (threads != 1)
      std::cerr << "note: --threads " << threads << " requested; running single-threaded\n";
    if (cg->parsed()) run_generate(gen, seed);
    if (cc->parsed()) run_corrupt(cor, seed);
    if (cl->parsed()) run_learn(lrn, seed, verbose);
    if (cm->parsed()) run_motifs(mot);
    if (cr->parsed()) run_reconstruct(rec, seed);
    if (cd->parsed()) run_denoise(den, seed);
    if (cdg->parsed()) run_mcmc_diag(diag, seed);
    if (ce->parsed()) run_eval(ev);
    if (cv->parsed()) std::cout << "ndl " << version_string << "\n";
  } catch (const internal_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
