#pragma once

#include <vector>

#include "ndl/graph.hpp"
#include "ndl/matrix.hpp"
#include "ndl/sampling.hpp"

namespace ndl {

/// k x k mesoscale patch: entry (a,b) = weight(x(a), x(b)).
Mat extract_patch(const Network& g, const Homomorphism& x);

/// Column-stacked copy of a k1 x k2 matrix: entry (i,j) lands at k1*j + i.
std::vector<double> vectorize(const Mat& m);

/// Inverse of vectorize for the given shape.
Mat reshape(const std::vector<double>& v, int rows, int cols);

/// 0/1 matrix marking the chain positions (i,i+1) and (i+1,i).
Mat on_chain_mask(int k);

/// Zero the chain positions of a k x k matrix. literal=true zeroes only the
/// (i,i+1) side, reproducing the one-sided bookkeeping convention; the default
/// zeroes both sides. Idempotent.
Mat off_chain_project(const Mat& m, bool literal = false);

/// Scale the chain positions by xi in [0,1]; xi=1 is the identity and xi=0
/// equals off_chain_project.
Mat thin_on_chain(const Mat& m, double xi, bool literal = false);

/// Apply off_chain_project to each column of a k^2 x r matrix of stacked patches.
Mat off_chain_project_columns(const Mat& w, int k, bool literal = false);

/// Apply thin_on_chain to each column of a k^2 x r matrix of stacked patches.
Mat thin_on_chain_columns(const Mat& w, int k, double xi, bool literal = false);

}  // namespace ndl
