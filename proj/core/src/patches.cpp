#include "ndl/patches.hpp"

namespace ndl {

namespace {

void check_square(const Mat& m) {
  if (m.rows != m.cols || m.rows < 2) throw parameter_error("patch must be k x k with k >= 2");
}

void check_xi(double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw parameter_error("xi must lie in [0,1]");
}

}  // namespace

Mat extract_patch(const Network& g, const Homomorphism& x) {
  int k = x.k();
  if (k < 2) throw parameter_error("patch requires a chain of length >= 2");
  Mat p(k, k);
  for (int b = 0; b < k; ++b)
    for (int a = 0; a < k; ++a) p(a, b) = g.weight(x.nodes[a], x.nodes[b]);
  return p;
}

std::vector<double> vectorize(const Mat& m) { return m.a; }

Mat reshape(const std::vector<double>& v, int rows, int cols) {
  if (rows < 0 || cols < 0 || v.size() != static_cast<std::size_t>(rows) * cols)
    throw parameter_error("reshape: size does not match the requested shape");
  Mat m(rows, cols);
  m.a = v;
  return m;
}

Mat on_chain_mask(int k) {
  if (k < 2) throw parameter_error("on_chain_mask requires k >= 2");
  Mat m(k, k);
  for (int i = 0; i + 1 < k; ++i) {
    m(i, i + 1) = 1.0;
    m(i + 1, i) = 1.0;
  }
  return m;
}

Mat off_chain_project(const Mat& m, bool literal) { return thin_on_chain(m, 0.0, literal); }

Mat thin_on_chain(const Mat& m, double xi, bool literal) {
  check_square(m);
  check_xi(xi);
  Mat out = m;
  for (int i = 0; i + 1 < m.rows; ++i) {
    out(i, i + 1) *= xi;
    if (!literal) out(i + 1, i) *= xi;
  }
  return out;
}

Mat off_chain_project_columns(const Mat& w, int k, bool literal) {
  return thin_on_chain_columns(w, k, 0.0, literal);
}

Mat thin_on_chain_columns(const Mat& w, int k, double xi, bool literal) {
  check_xi(xi);
  if (k < 2 || w.rows != k * k) throw parameter_error("column length must equal k^2");
  Mat out = w;
  for (int j = 0; j < w.cols; ++j) {
    double* c = out.col(j);
    for (int i = 0; i + 1 < k; ++i) {
      c[k * (i + 1) + i] *= xi;            // entry (i, i+1), column-stacked
      if (!literal) c[k * i + (i + 1)] *= xi;  // entry (i+1, i)
    }
  }
  return out;
}

}  // namespace ndl
