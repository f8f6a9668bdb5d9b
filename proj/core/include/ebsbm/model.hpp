#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ebsbm/matrix.hpp"

namespace ebsbm {

using Node = std::uint32_t;
using BlockIndex = std::uint32_t;

/// A disjoint cover of the nodes [0, n) by ordered, non-empty blocks.
///
/// Block order is the order given at construction; nodes inside a block are
/// kept sorted. Instances are immutable.
class Partition {
 public:
  /// Validates and builds a partition. Empty node sets are dropped first.
  /// Throws Error{Range} for out-of-range nodes, Error{Overlap} when a node
  /// appears twice, Error{Coverage} when a node is missing and
  /// Error{EmptyPartition} when no block is left.
  static Partition make(std::size_t n, std::vector<std::vector<Node>> blocks);

  /// Builds a partition from a node -> label map. Labels that are never used
  /// are dropped; surviving blocks are ordered by label value.
  static Partition from_labels(std::span<const std::uint32_t> labels);

  /// The partition with a single block holding every node.
  static Partition singleton(std::size_t n);

  std::size_t num_nodes() const noexcept { return block_of_.size(); }
  std::size_t num_blocks() const noexcept { return blocks_.size(); }

  std::span<const Node> block(std::size_t i) const { return blocks_.at(i); }
  std::size_t block_size(std::size_t i) const { return blocks_.at(i).size(); }
  const std::vector<std::vector<Node>>& blocks() const noexcept {
    return blocks_;
  }

  BlockIndex block_of(Node u) const;
  std::span<const BlockIndex> labels() const noexcept { return block_of_; }

  /// True when every block of *this lies inside a single block of `coarser`.
  bool refines(const Partition& coarser) const;

  /// Same nodes grouped the same way, regardless of block order.
  bool same_grouping(const Partition& other) const;

  bool operator==(const Partition&) const = default;

 private:
  Partition() = default;

  std::vector<std::vector<Node>> blocks_;
  std::vector<BlockIndex> block_of_;
};

/// Absolute tolerance on the total mass of a block probability matrix.
inline constexpr double kMassTolerance = 1e-9;

/// p x p matrix of per-node-pair edge probabilities, normalized against the
/// block sizes of the partition it was validated with.
class BlockMatrix {
 public:
  /// Throws Error{Range} for entries outside [0, 1] or a dimension mismatch,
  /// and Error{Normalization} when sum M[i,j] |b_i| |b_j| deviates from 1 by
  /// more than kMassTolerance.
  static BlockMatrix validate(const Partition& partition,
                              const SquareMatrix<double>& entries);
  static BlockMatrix validate(const Partition& partition,
                              const std::vector<std::vector<double>>& rows);

  /// Divides every entry by the actual mass before validating. Used for
  /// models whose entries were rounded for print.
  static BlockMatrix renormalized(const Partition& partition,
                                  const SquareMatrix<double>& entries);

  /// sum_{i,j} entries[i,j] * |b_i| * |b_j|
  static double mass(const Partition& partition,
                     const SquareMatrix<double>& entries);

  std::size_t dim() const noexcept { return entries_.dim(); }
  double operator()(std::size_t i, std::size_t j) const {
    return entries_(i, j);
  }
  const SquareMatrix<double>& entries() const noexcept { return entries_; }

 private:
  explicit BlockMatrix(SquareMatrix<double> entries)
      : entries_(std::move(entries)) {}

  SquareMatrix<double> entries_;
};

struct Edge {
  Node src = 0;
  Node dst = 0;

  bool operator==(const Edge&) const = default;
};

/// Ordered directed multigraph edge sequence over [0, n). Duplicates and
/// self-loops are allowed and order is significant.
class EdgeList {
 public:
  EdgeList() = default;
  /// Throws Error{Range} if an endpoint is >= n.
  EdgeList(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  const Edge& operator[](std::size_t k) const { return edges_[k]; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  auto begin() const noexcept { return edges_.begin(); }
  auto end() const noexcept { return edges_.end(); }

  /// Edges reordered so that result[k] = (*this)[order[k]].
  EdgeList permuted(std::span<const std::size_t> order) const;

  bool operator==(const EdgeList&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
};

/// Edge-based stochastic block model (B, M): a distribution over single
/// directed node pairs that is constant on block pairs.
class EdgeSbm {
 public:
  /// Throws Error{Range} if the matrix dimension differs from the block
  /// count and Error{Normalization} if the mass is off.
  EdgeSbm(Partition partition, BlockMatrix matrix);

  const Partition& partition() const noexcept { return partition_; }
  const BlockMatrix& matrix() const noexcept { return matrix_; }
  std::size_t num_nodes() const noexcept { return partition_.num_nodes(); }

  double edge_probability(Node u, Node v) const;

  /// sum_k log2 P[e_k] in bits; -inf as soon as one edge has probability 0.
  double log2_probability(const EdgeList& edges) const;

 private:
  Partition partition_;
  BlockMatrix matrix_;
};

/// c_ij = #{k < prefix_len : src_k in b_i and dst_k in b_j}.
SquareMatrix<std::uint64_t> block_pair_counts(const Partition& partition,
                                              const EdgeList& edges,
                                              std::size_t prefix_len);

/// s_ij = |b_i| * |b_j|.
SquareMatrix<std::uint64_t> block_pair_sizes(const Partition& partition);

}  // namespace ebsbm
