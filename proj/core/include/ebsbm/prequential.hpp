#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ebsbm/matrix.hpp"
#include "ebsbm/model.hpp"
#include "ebsbm/rng.hpp"

namespace ebsbm {

/// Sequential block-constant predictor after x of m edges.
///
/// The predictor minimizing
///   -(1/m) sum_{k<=x} log2 Q[e_k] - (m-x)/(m n^2) sum_{u,v} log2 Q[u,v]
/// over block-constant distributions is, for u in b_i and v in b_j,
///
///   Q[u,v] = (c_ij + (m - x) s_ij / n^2) / (m s_ij)
///
/// i.e. the observed block-pair counts smoothed by a uniform prior of weight
/// m - x. It is strictly positive while x < m.
class PrequentialState {
 public:
  /// Fresh state (x = 0). Throws Error{EmptyEdgeList} when m == 0.
  PrequentialState(Partition partition, std::size_t m);

  const Partition& partition() const noexcept { return partition_; }
  std::size_t num_nodes() const noexcept { return partition_.num_nodes(); }
  std::size_t consumed() const noexcept { return x_; }
  std::size_t total() const noexcept { return m_; }
  bool exhausted() const noexcept { return x_ >= m_; }

  const SquareMatrix<std::uint64_t>& counts() const noexcept { return counts_; }
  const SquareMatrix<std::uint64_t>& pair_sizes() const noexcept {
    return pair_sizes_;
  }

  /// Q^{B,x}[u,v]. Throws Error{Exhausted} once x == m, Error{Range} for
  /// nodes outside [0, n).
  double probability(Node u, Node v) const;

  /// Q^{B,x} on any node pair of block pair (i, j).
  double block_probability(BlockIndex i, BlockIndex j) const;

  /// sum_{i,j} Q_ij s_ij, which is 1 up to rounding.
  double total_mass() const;

  /// Consumes one edge. Throws Error{Exhausted} once x == m.
  void advance(Edge edge);

  /// Functional form of advance().
  PrequentialState advanced(Edge edge) const;

 private:
  Partition partition_;
  SquareMatrix<std::uint64_t> counts_;
  SquareMatrix<std::uint64_t> pair_sizes_;
  std::size_t m_;
  std::size_t x_ = 0;
};

struct EvaluationReport {
  std::string label;
  std::vector<double> probability_trace;  // Q^{B,x-1}[e_x], x = 1..m
  std::vector<double> code_length_trace;  // -log2 of the above, in bits
  double mean_code_length = 0.0;           // bits per edge
  double mean_prediction_probability = 0.0;
  std::vector<std::size_t> edge_order;     // evaluated edge k is edges[edge_order[k]]
};

/// Scalar summary of one evaluation without the traces.
struct Score {
  double mean_code_length = 0.0;
  double mean_prediction_probability = 0.0;

  bool operator==(const Score&) const = default;
};

/// Single left-to-right pass in the stored edge order. Each prediction is
/// taken before its edge is counted. Throws Error{EmptyEdgeList} and
/// Error{NodeCountMismatch}.
EvaluationReport evaluate(const EdgeList& edges, const Partition& partition,
                          std::string label = {});

/// As evaluate(), visiting edges[order[0]], edges[order[1]], ...
EvaluationReport evaluate(const EdgeList& edges, const Partition& partition,
                          std::span<const std::size_t> order,
                          std::string label = {});

/// Same numbers as evaluate() without materializing traces.
Score score(const EdgeList& edges, const Partition& partition);
Score score(const EdgeList& edges, const Partition& partition,
            std::span<const std::size_t> order);

double mean_prediction_probability(const EdgeList& edges,
                                   const Partition& partition);

/// Random edge orders shared by every partition scored with the same seed.
/// With `identity_first` the first order is the stored one.
std::vector<std::vector<std::size_t>> edge_orders(std::size_t m,
                                                  std::size_t num_orders,
                                                  Seed seed,
                                                  bool identity_first = false);

struct AveragedScore {
  double mean_code_length = 0.0;
  double mean_prediction_probability = 0.0;
  std::vector<double> per_order;  // mean code length for each order
  double min_code_length = 0.0;
  double max_code_length = 0.0;
};

/// Mean code length averaged over `num_orders` uniform random edge orders.
/// Throws Error{Range} when num_orders == 0.
AveragedScore averaged_code_length(const EdgeList& edges,
                                   const Partition& partition,
                                   std::size_t num_orders, Seed seed,
                                   bool identity_first = false);

/// As above over explicit precomputed orders.
AveragedScore averaged_code_length(
    const EdgeList& edges, const Partition& partition,
    std::span<const std::vector<std::size_t>> orders);

}  // namespace ebsbm
