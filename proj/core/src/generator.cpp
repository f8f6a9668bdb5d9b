#include "ebsbm/generator.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "ebsbm/error.hpp"

namespace ebsbm {

EdgeSampler::EdgeSampler(const EdgeSbm& model) : partition_(model.partition()) {
  const std::size_t p = partition_.num_blocks();
  cumulative_.resize(p * p);
  double running = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double weight = model.matrix()(i, j) *
                            static_cast<double>(partition_.block_size(i)) *
                            static_cast<double>(partition_.block_size(j));
      running += weight;
      cumulative_[i * p + j] = running;
      if (weight > 0.0) last_positive_ = i * p + j;
    }
  }
}

Edge EdgeSampler::operator()(CounterRng& rng) const {
  const double target = uniform_unit(rng) * cumulative_.back();
  // First cell whose cumulative weight exceeds the target; zero-weight cells
  // share their predecessor's value and can never be picked.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  auto cell = static_cast<std::size_t>(it - cumulative_.begin());
  cell = std::min(cell, last_positive_);
  const std::size_t p = partition_.num_blocks();
  const auto src_block = partition_.block(cell / p);
  const auto dst_block = partition_.block(cell % p);
  const Node u = src_block[uniform_below(rng, src_block.size())];
  const Node v = dst_block[uniform_below(rng, dst_block.size())];
  return Edge{u, v};
}

EdgeList EdgeSampler::sample(std::size_t m, Seed seed) const {
  CounterRng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t k = 0; k < m; ++k) edges.push_back((*this)(rng));
  return EdgeList(partition_.num_nodes(), std::move(edges));
}

EdgeList sample_edges(const EdgeSbm& model, std::size_t m, Seed seed) {
  return EdgeSampler(model).sample(m, seed);
}

Partition consecutive_blocks(std::size_t n,
                             const std::vector<std::size_t>& sizes) {
  if (sizes.empty()) {
    throw Error(ErrorKind::EmptyPartition, "no block sizes given");
  }
  const auto total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total != n) {
    std::ostringstream msg;
    msg << "block sizes sum to " << total << ", expected " << n;
    throw Error(ErrorKind::SizeSum, msg.str());
  }
  std::vector<std::vector<Node>> blocks;
  blocks.reserve(sizes.size());
  Node next = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] == 0) {
      throw Error(ErrorKind::Range,
                  "block " + std::to_string(i) + " has size zero");
    }
    std::vector<Node> block(sizes[i]);
    std::iota(block.begin(), block.end(), next);
    next += static_cast<Node>(sizes[i]);
    blocks.push_back(std::move(block));
  }
  return Partition::make(n, std::move(blocks));
}

Partition uniform_blocks(std::size_t n, std::size_t k) {
  if (k == 0 || n == 0 || n % k != 0) {
    std::ostringstream msg;
    msg << k << " blocks do not evenly divide " << n << " nodes";
    throw Error(ErrorKind::Divisibility, msg.str());
  }
  return consecutive_blocks(n, std::vector<std::size_t>(k, n / k));
}

EdgeSbm diagonal_model(std::size_t n, std::size_t k) {
  auto partition = uniform_blocks(n, k);
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  SquareMatrix<double> entries(k, 0.0);
  for (std::size_t i = 0; i < k; ++i) entries(i, i) = static_cast<double>(k) / nn;
  auto matrix = BlockMatrix::validate(partition, entries);
  return EdgeSbm(std::move(partition), std::move(matrix));
}

EdgeSbm mixing_model(std::size_t n, unsigned mixing_index) {
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorKind::Parity,
                "mixing model needs an even node count, got " + std::to_string(n));
  }
  if (mixing_index > 9) {
    throw Error(ErrorKind::Range, "mixing index must be in 0..9, got " +
                                      std::to_string(mixing_index));
  }
  auto partition = uniform_blocks(n, 2);
  const double scale = 10.0 * static_cast<double>(n) * static_cast<double>(n);
  const double inside = static_cast<double>(20 - mixing_index) / scale;
  const double across = static_cast<double>(mixing_index) / scale;
  SquareMatrix<double> entries(2, across);
  entries(0, 0) = inside;
  entries(1, 1) = inside;
  auto matrix = BlockMatrix::validate(partition, entries);
  return EdgeSbm(std::move(partition), std::move(matrix));
}

EdgeSbm heterogeneous_model(std::size_t n,
                            const std::vector<std::size_t>& block_sizes,
                            const std::vector<double>& within_probs,
                            bool renormalize) {
  if (block_sizes.size() != within_probs.size()) {
    throw Error(ErrorKind::SizeSum, "got " + std::to_string(block_sizes.size()) +
                                        " block sizes but " +
                                        std::to_string(within_probs.size()) +
                                        " probabilities");
  }
  auto partition = consecutive_blocks(n, block_sizes);
  SquareMatrix<double> entries(block_sizes.size(), 0.0);
  for (std::size_t i = 0; i < block_sizes.size(); ++i) entries(i, i) = within_probs[i];
  auto matrix = renormalize ? BlockMatrix::renormalized(partition, entries)
                            : BlockMatrix::validate(partition, entries);
  return EdgeSbm(std::move(partition), std::move(matrix));
}

}  // namespace ebsbm
