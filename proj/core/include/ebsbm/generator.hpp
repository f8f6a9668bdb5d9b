#pragma once

#include <cstddef>
#include <vector>

#include "ebsbm/model.hpp"
#include "ebsbm/rng.hpp"

namespace ebsbm {

/// Two-stage i.i.d. edge sampler: a block pair (i, j) is drawn with weight
/// M[i,j] |b_i| |b_j| from a cumulative table, then both endpoints are drawn
/// uniformly inside their blocks.
class EdgeSampler {
 public:
  explicit EdgeSampler(const EdgeSbm& model);

  Edge operator()(CounterRng& rng) const;

  EdgeList sample(std::size_t m, Seed seed) const;

 private:
  Partition partition_;
  std::vector<double> cumulative_;  // over the p*p cells, row-major
  std::size_t last_positive_ = 0;
};

EdgeList sample_edges(const EdgeSbm& model, std::size_t m, Seed seed);

/// k consecutive ranges of n/k nodes. Throws Error{Divisibility}.
Partition uniform_blocks(std::size_t n, std::size_t k);

/// Consecutive ranges with the given sizes. Throws Error{SizeSum} when the
/// sizes do not add up to n and Error{Range} on a zero size.
Partition consecutive_blocks(std::size_t n, const std::vector<std::size_t>& sizes);

/// k equal blocks with k/n^2 on the diagonal and 0 elsewhere.
EdgeSbm diagonal_model(std::size_t n, std::size_t k);

/// Two equal blocks with (2 - i/10)/n^2 inside and (i/10)/n^2 across.
/// Throws Error{Parity} for odd n and Error{Range} for i outside 0..9.
EdgeSbm mixing_model(std::size_t n, unsigned mixing_index);

/// Diagonal model over consecutive blocks with the given sizes.
EdgeSbm heterogeneous_model(std::size_t n,
                            const std::vector<std::size_t>& block_sizes,
                            const std::vector<double>& within_probs,
                            bool renormalize);

}  // namespace ebsbm
