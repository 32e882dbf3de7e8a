#include "ndl/factorization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ndl/graph.hpp"  // format_double, atomic_write_file

namespace ndl {

namespace {

void check_coding_args(const Mat& x, const Mat& w, double lambda, int iters, double tol) {
  if (x.rows != w.rows) throw parameter_error("sparse_code: X and W row counts differ");
  if (lambda < 0.0) throw parameter_error("sparse_code: lambda must be >= 0");
  if (iters < 1) throw parameter_error("sparse_code: iters must be >= 1");
  if (!(tol >= 0.0)) throw parameter_error("sparse_code: tol must be >= 0");
}

/// One projected-gradient step; returns the max-norm movement.
/// The half-gradient of ||X-WH||^2 is (W^T W H - W^T X), so the L1 term
/// contributes lambda/2 inside the step.
double pgd_step(Mat& h, const Mat& wtw, const Mat& wtx, double inv_l, double lambda) {
  double move = 0.0;
  Mat g = matmul(wtw, h);
  for (int j = 0; j < h.cols; ++j) {
    double* hj = h.col(j);
    const double* gj = g.col(j);
    const double* xj = wtx.col(j);
    for (int i = 0; i < h.rows; ++i) {
      double next = hj[i] - inv_l * (gj[i] - xj[i] + 0.5 * lambda);
      if (next < 0.0) next = 0.0;
      move = std::max(move, std::abs(next - hj[i]));
      hj[i] = next;
    }
  }
  return move;
}

}  // namespace

Mat sparse_code(const Mat& x, const Mat& w, double lambda, int iters, double tol) {
  check_coding_args(x, w, lambda, iters, tol);
  Mat h(w.cols, x.cols);
  Mat wtw = matmul_ta(w, w);
  double l = trace(wtw);
  if (l <= 0.0) return h;  // all-zero dictionary
  Mat wtx = matmul_ta(w, x);
  double inv_l = 1.0 / l;
  for (int it = 0; it < iters; ++it)
    if (pgd_step(h, wtw, wtx, inv_l, lambda) < tol) break;
  return h;
}

double coding_kkt_residual(const Mat& x, const Mat& w, const Mat& h, double lambda) {
  Mat wtw = matmul_ta(w, w);
  double l = trace(wtw);
  if (l <= 0.0) return max_abs(h);
  Mat wtx = matmul_ta(w, x);
  Mat next = h;
  return pgd_step(next, wtw, wtx, 1.0 / l, lambda);
}

double coding_objective(const Mat& x, const Mat& w, const Mat& h, double lambda) {
  Mat resid = matmul(w, h);
  if (!resid.same_shape(x)) throw parameter_error("coding_objective: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < resid.a.size(); ++i) {
    double d = x.a[i] - resid.a[i];
    s += d * d;
  }
  return s + lambda * l1_norm(h);
}

Mat dictionary_update(const Mat& w, const Mat& p, const Mat& q, int sweeps) {
  if (p.rows != w.cols || p.cols != w.cols)
    throw parameter_error("dictionary_update: P must be r x r");
  if (q.rows != w.cols || q.cols != w.rows)
    throw parameter_error("dictionary_update: Q must be r x k^2");
  if (sweeps < 1) throw parameter_error("dictionary_update: sweeps must be >= 1");
  Mat out = w;
  int d = w.rows;
  int r = w.cols;
  std::vector<double> u(d);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (int j = 0; j < r; ++j) {
      double step = 1.0 / (p(j, j) + 1.0);
      // u = (current W) p(:,j) - q(j,:)^T, using columns already updated this sweep
      std::fill(u.begin(), u.end(), 0.0);
      for (int l = 0; l < r; ++l) {
        double pl = p(l, j);
        if (pl == 0.0) continue;
        const double* wl = out.col(l);
        for (int i = 0; i < d; ++i) u[i] += wl[i] * pl;
      }
      double* wj = out.col(j);
      double norm_sq = 0.0;
      for (int i = 0; i < d; ++i) {
        double next = wj[i] - step * (u[i] - q(j, i));
        if (next < 0.0) next = 0.0;
        wj[i] = next;
        norm_sq += next * next;
      }
      double norm = std::sqrt(norm_sq);
      if (norm > 1.0)
        for (int i = 0; i < d; ++i) wj[i] /= norm;
    }
  }
  return out;
}

double surrogate_objective(const Mat& w, const Mat& p, const Mat& q) {
  Mat wp = matmul(w, p);
  double tr1 = 0.0;
  for (std::size_t i = 0; i < wp.a.size(); ++i) tr1 += wp.a[i] * w.a[i];
  double tr2 = 0.0;
  for (int l = 0; l < w.cols; ++l)
    for (int i = 0; i < w.rows; ++i) tr2 += w(i, l) * q(l, i);
  return tr1 - 2.0 * tr2;
}

OnmfStep onmf_step(AggregateState& agg, Mat& w, const Mat& x, double lambda, int code_iters,
                   double code_tol, int dict_sweeps) {
  int r = w.cols;
  int d = w.rows;
  if (agg.t == 0) {
    agg.p = Mat(r, r);
    agg.q = Mat(r, d);
  }
  if (agg.p.rows != r || agg.p.cols != r || agg.q.rows != r || agg.q.cols != d)
    throw parameter_error("onmf_step: aggregate shapes do not match the dictionary");

  OnmfStep step;
  step.h = sparse_code(x, w, lambda, code_iters, code_tol);
  Mat recon = matmul(w, step.h);
  double err = 0.0;
  double xnorm = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    double dlt = x.a[i] - recon.a[i];
    err += dlt * dlt;
    xnorm += x.a[i] * x.a[i];
  }
  step.fit_rel = xnorm > 0.0 ? std::sqrt(err / xnorm) : 0.0;

  agg.t += 1;
  double alpha = 1.0 / static_cast<double>(agg.t);
  Mat hh = matmul_tb(step.h, step.h);
  Mat hx = matmul_tb(step.h, x);
  for (std::size_t i = 0; i < agg.p.a.size(); ++i)
    agg.p.a[i] = (1.0 - alpha) * agg.p.a[i] + alpha * hh.a[i];
  for (std::size_t i = 0; i < agg.q.a.size(); ++i)
    agg.q.a[i] = (1.0 - alpha) * agg.q.a[i] + alpha * hx.a[i];

  w = dictionary_update(w, agg.p, agg.q, dict_sweeps);
  return step;
}

Dictionary random_dictionary(int k, int r, Rng& rng) {
  if (k < 2) throw parameter_error("dictionary requires k >= 2");
  if (r < 1) throw parameter_error("dictionary requires r >= 1");
  Dictionary d;
  d.k = k;
  d.r = r;
  d.w = Mat(k * k, r);
  for (double& v : d.w.a) v = rng.uniform01();
  for (int j = 0; j < r; ++j) {
    double norm = col_norm(d.w, j);
    if (norm > 0.0)
      for (int i = 0; i < d.w.rows; ++i) d.w(i, j) /= norm;
  }
  return d;
}

void save_dictionary(const Dictionary& d, const std::filesystem::path& path) {
  if (d.w.rows != d.k * d.k || d.w.cols != d.r)
    throw parameter_error("dictionary shape does not match its k and r");
  std::string out = "NDL-DICT 1 k=" + std::to_string(d.k) + " r=" + std::to_string(d.r) + "\n";
  for (int j = 0; j < d.r; ++j) {
    const double* c = d.w.col(j);
    for (int i = 0; i < d.w.rows; ++i) {
      if (i) out += ' ';
      out += format_double(c[i]);
    }
    out += '\n';
  }
  atomic_write_file(path, out);
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw parse_error("line 1: empty dictionary file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::istringstream hdr(line);
  std::string magic, version, ktok, rtok;
  if (!(hdr >> magic >> version >> ktok >> rtok) || magic != "NDL-DICT" || version != "1" ||
      ktok.rfind("k=", 0) != 0 || rtok.rfind("r=", 0) != 0)
    throw parse_error("line 1: expected 'NDL-DICT 1 k=<k> r=<r>'");
  auto parse_int = [&](const std::string& tok) {
    int v = 0;
    const char* b = tok.data() + 2;
    const char* e = tok.data() + tok.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e)
      throw parse_error("line 1: cannot parse '" + tok + "'");
    return v;
  };
  Dictionary d;
  d.k = parse_int(ktok);
  d.r = parse_int(rtok);
  if (d.k < 2 || d.r < 1) throw parse_error("line 1: k must be >= 2 and r >= 1");
  d.w = Mat(d.k * d.k, d.r);
  for (int j = 0; j < d.r; ++j) {
    if (!std::getline(in, line))
      throw parse_error("line " + std::to_string(j + 2) + ": missing motif row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* ptr = line.data();
    const char* end = ptr + line.size();
    double* c = d.w.col(j);
    for (int i = 0; i < d.w.rows; ++i) {
      while (ptr < end && *ptr == ' ') ++ptr;
      double v = 0.0;
      auto res = std::from_chars(ptr, end, v);
      if (res.ec != std::errc())
        throw parse_error("line " + std::to_string(j + 2) + ": expected " +
                          std::to_string(d.w.rows) + " values");
      if (v < 0.0 || !std::isfinite(v))
        throw consistency_error("line " + std::to_string(j + 2) +
                                ": dictionary entries must be finite and >= 0");
      c[i] = v;
      ptr = res.ptr;
    }
    while (ptr < end && *ptr == ' ') ++ptr;
    if (ptr != end)
      throw parse_error("line " + std::to_string(j + 2) + ": trailing characters");
    if (col_norm(d.w, j) > 1.0 + 1e-9)
      throw consistency_error("line " + std::to_string(j + 2) + ": motif column norm exceeds 1");
  }
  return d;
}

}  // namespace ndl
