#pragma once

#include <filesystem>

#include "ndl/matrix.hpp"
#include "ndl/rng.hpp"

namespace ndl {

/// r nonnegative column-stacked k x k motifs; every column norm <= 1.
struct Dictionary {
  int k = 0;
  int r = 0;
  Mat w;  // k^2 x r
};

/// Running second-moment aggregates of the online factorization:
/// p = mean of H_s H_s^T and q = mean of H_s X_s^T over the steps so far.
struct AggregateState {
  long t = 0;
  Mat p;  // r x r, symmetric PSD
  Mat q;  // r x k^2
};

/// Code X's columns against W: argmin_{H >= 0} ||X - W H||_F^2 + lambda ||H||_1
/// by projected gradient descent with step 1/tr(W^T W). Stops after `iters`
/// rounds or when the iterate moves less than tol in max norm; an all-zero W
/// codes to H = 0.
Mat sparse_code(const Mat& x, const Mat& w, double lambda, int iters = 100, double tol = 1e-8);

/// Max-norm distance between H and one further projected-gradient step;
/// zero exactly at the coding optimum.
double coding_kkt_residual(const Mat& x, const Mat& w, const Mat& h, double lambda);

/// Coding objective ||X - W H||_F^2 + lambda ||H||_1.
double coding_objective(const Mat& x, const Mat& w, const Mat& h, double lambda);

/// `sweeps` passes of per-column projected updates of W against aggregates
/// (p, q); each column moves by 1/(p(j,j)+1) times its gradient direction and
/// is projected (clip negatives, rescale to norm <= 1). Never increases the
/// surrogate objective.
Mat dictionary_update(const Mat& w, const Mat& p, const Mat& q, int sweeps = 5);

/// Surrogate objective tr(W p W^T) - 2 tr(W q).
double surrogate_objective(const Mat& w, const Mat& p, const Mat& q);

struct OnmfStep {
  Mat h;                 // r x N code of this minibatch
  double fit_rel = 0.0;  // ||X - W_prev H||_F / ||X||_F (0 when X == 0)
};

/// One online step at time t+1: code the minibatch against the current
/// dictionary, fold H H^T and H X^T into the aggregates with weight 1/(t+1),
/// then refresh the dictionary in place.
OnmfStep onmf_step(AggregateState& agg, Mat& w, const Mat& x, double lambda, int code_iters = 100,
                   double code_tol = 1e-8, int dict_sweeps = 5);

/// Uniform [0,1] entries with each column rescaled to unit norm.
Dictionary random_dictionary(int k, int r, Rng& rng);

/// Text format: "NDL-DICT 1 k=<k> r=<r>" then r lines of k^2 space-separated
/// shortest round-trip decimals (one motif column per line). Loading a saved
/// dictionary reproduces it bit for bit.
void save_dictionary(const Dictionary& d, const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);

}  // namespace ndl
