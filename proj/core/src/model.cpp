#include "ebsbm/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ebsbm/error.hpp"

namespace ebsbm {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Range: return "range";
    case ErrorKind::Overlap: return "overlap";
    case ErrorKind::Coverage: return "coverage";
    case ErrorKind::EmptyPartition: return "empty-partition";
    case ErrorKind::Normalization: return "normalization";
    case ErrorKind::Divisibility: return "divisibility";
    case ErrorKind::Parity: return "parity";
    case ErrorKind::SizeSum: return "size-sum";
    case ErrorKind::Exhausted: return "exhausted";
    case ErrorKind::EmptyEdgeList: return "empty-edge-list";
    case ErrorKind::NodeCountMismatch: return "node-count-mismatch";
    case ErrorKind::Bound: return "bound";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

namespace {

constexpr BlockIndex kUnassigned = std::numeric_limits<BlockIndex>::max();

}  // namespace

Partition Partition::make(std::size_t n,
                          std::vector<std::vector<Node>> blocks) {
  std::erase_if(blocks, [](const auto& b) { return b.empty(); });
  if (blocks.empty()) {
    throw Error(ErrorKind::EmptyPartition, "partition has no non-empty block");
  }
  Partition out;
  out.block_of_.assign(n, kUnassigned);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto& block = blocks[i];
    std::sort(block.begin(), block.end());
    for (Node u : block) {
      if (u >= n) {
        std::ostringstream msg;
        msg << "node " << u << " in block " << i << " is outside [0, " << n
            << ")";
        throw Error(ErrorKind::Range, msg.str());
      }
      if (out.block_of_[u] != kUnassigned) {
        std::ostringstream msg;
        msg << "node " << u << " appears in blocks " << out.block_of_[u]
            << " and " << i;
        throw Error(ErrorKind::Overlap, msg.str());
      }
      out.block_of_[u] = static_cast<BlockIndex>(i);
    }
  }
  auto missing = std::find(out.block_of_.begin(), out.block_of_.end(),
                           kUnassigned);
  if (missing != out.block_of_.end()) {
    std::ostringstream msg;
    msg << "node " << (missing - out.block_of_.begin())
        << " is not covered by any block";
    throw Error(ErrorKind::Coverage, msg.str());
  }
  out.blocks_ = std::move(blocks);
  return out;
}

Partition Partition::from_labels(std::span<const std::uint32_t> labels) {
  if (labels.empty()) {
    throw Error(ErrorKind::EmptyPartition, "partition has no nodes");
  }
  const auto max_label = *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<Node>> blocks(std::size_t{max_label} + 1);
  for (std::size_t u = 0; u < labels.size(); ++u) {
    blocks[labels[u]].push_back(static_cast<Node>(u));
  }
  return make(labels.size(), std::move(blocks));
}

Partition Partition::singleton(std::size_t n) {
  std::vector<Node> all(n);
  std::iota(all.begin(), all.end(), Node{0});
  return make(n, {std::move(all)});
}

BlockIndex Partition::block_of(Node u) const {
  if (u >= block_of_.size()) {
    throw Error(ErrorKind::Range, "node " + std::to_string(u) +
                                      " is outside the partition");
  }
  return block_of_[u];
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.num_nodes() != num_nodes()) return false;
  return std::all_of(blocks_.begin(), blocks_.end(), [&](const auto& block) {
    const auto target = coarser.block_of_[block.front()];
    return std::all_of(block.begin(), block.end(), [&](Node u) {
      return coarser.block_of_[u] == target;
    });
  });
}

bool Partition::same_grouping(const Partition& other) const {
  return num_blocks() == other.num_blocks() && refines(other) &&
         other.refines(*this);
}

double BlockMatrix::mass(const Partition& partition,
                         const SquareMatrix<double>& entries) {
  const std::size_t p = partition.num_blocks();
  double total = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      total += entries(i, j) * static_cast<double>(partition.block_size(i)) *
               static_cast<double>(partition.block_size(j));
    }
  }
  return total;
}

BlockMatrix BlockMatrix::validate(const Partition& partition,
                                  const SquareMatrix<double>& entries) {
  const std::size_t p = partition.num_blocks();
  if (entries.dim() != p) {
    std::ostringstream msg;
    msg << "block matrix is " << entries.dim() << "x" << entries.dim()
        << " but the partition has " << p << " blocks";
    throw Error(ErrorKind::Range, msg.str());
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const double e = entries(i, j);
      if (!(e >= 0.0 && e <= 1.0)) {
        std::ostringstream msg;
        msg << "entry (" << i << "," << j << ") = " << e
            << " is outside [0, 1]";
        throw Error(ErrorKind::Range, msg.str());
      }
    }
  }
  const double total = mass(partition, entries);
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "block matrix mass is " << total << ", expected 1";
    throw Error(ErrorKind::Normalization, msg.str());
  }
  return BlockMatrix(entries);
}

BlockMatrix BlockMatrix::validate(
    const Partition& partition, const std::vector<std::vector<double>>& rows) {
  SquareMatrix<double> entries(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw Error(ErrorKind::Range, "block matrix rows must be square");
    }
    for (std::size_t j = 0; j < rows.size(); ++j) entries(i, j) = rows[i][j];
  }
  return validate(partition, entries);
}

BlockMatrix BlockMatrix::renormalized(const Partition& partition,
                                      const SquareMatrix<double>& entries) {
  if (entries.dim() != partition.num_blocks()) {
    return validate(partition, entries);  // reports the dimension mismatch
  }
  const double total = mass(partition, entries);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorKind::Normalization,
                "block matrix mass must be positive to renormalize");
  }
  SquareMatrix<double> scaled = entries;
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled.data()[i] /= total;
  return validate(partition, scaled);
}

EdgeList::EdgeList(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const auto& e = edges_[k];
    if (e.src >= n_ || e.dst >= n_) {
      std::ostringstream msg;
      msg << "edge " << k << " (" << e.src << "," << e.dst
          << ") has an endpoint outside [0, " << n_ << ")";
      throw Error(ErrorKind::Range, msg.str());
    }
  }
}

EdgeList EdgeList::permuted(std::span<const std::size_t> order) const {
  if (order.size() != edges_.size()) {
    throw Error(ErrorKind::Range, "edge order has the wrong length");
  }
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (std::size_t k : order) out.push_back(edges_.at(k));
  EdgeList result;
  result.n_ = n_;
  result.edges_ = std::move(out);
  return result;
}

EdgeSbm::EdgeSbm(Partition partition, BlockMatrix matrix)
    : partition_(std::move(partition)), matrix_(std::move(matrix)) {
  // Re-check against this partition: a BlockMatrix may have been validated
  // against a different one.
  BlockMatrix::validate(partition_, matrix_.entries());
}

double EdgeSbm::edge_probability(Node u, Node v) const {
  return matrix_(partition_.block_of(u), partition_.block_of(v));
}

double EdgeSbm::log2_probability(const EdgeList& edges) const {
  if (edges.num_nodes() != num_nodes()) {
    throw Error(ErrorKind::NodeCountMismatch,
                "edge list and model have different node counts");
  }
  double total = 0.0;
  for (const auto& e : edges) {
    const double q = edge_probability(e.src, e.dst);
    if (q == 0.0) return -std::numeric_limits<double>::infinity();
    total += std::log2(q);
  }
  return total;
}

SquareMatrix<std::uint64_t> block_pair_counts(const Partition& partition,
                                              const EdgeList& edges,
                                              std::size_t prefix_len) {
  if (prefix_len > edges.size()) {
    throw Error(ErrorKind::Range, "prefix length exceeds the edge count");
  }
  if (edges.num_nodes() != partition.num_nodes()) {
    throw Error(ErrorKind::NodeCountMismatch,
                "edge list and partition have different node counts");
  }
  SquareMatrix<std::uint64_t> counts(partition.num_blocks(), 0);
  for (std::size_t k = 0; k < prefix_len; ++k) {
    const auto& e = edges[k];
    ++counts(partition.block_of(e.src), partition.block_of(e.dst));
  }
  return counts;
}

SquareMatrix<std::uint64_t> block_pair_sizes(const Partition& partition) {
  const std::size_t p = partition.num_blocks();
  SquareMatrix<std::uint64_t> sizes(p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      sizes(i, j) = static_cast<std::uint64_t>(partition.block_size(i)) *
                    partition.block_size(j);
    }
  }
  return sizes;
}

}  // namespace ebsbm
