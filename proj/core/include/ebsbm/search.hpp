#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ebsbm/model.hpp"
#include "ebsbm/prequential.hpp"
#include "ebsbm/rng.hpp"

namespace ebsbm {

struct FamilyMember {
  std::int64_t parameter = 0;
  Partition partition;
};

/// Ordered list of candidate partitions on a common node set, each tagged by
/// a distinct integer parameter (block count, cut position, offset, ...).
class PartitionFamily {
 public:
  /// Throws Error{EmptyPartition} for an empty member list,
  /// Error{NodeCountMismatch} when members disagree on n and Error{Range}
  /// on a repeated parameter.
  PartitionFamily(std::string label, std::vector<FamilyMember> members);

  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t num_nodes() const noexcept {
    return members_.front().partition.num_nodes();
  }
  const FamilyMember& operator[](std::size_t i) const { return members_.at(i); }
  const std::vector<FamilyMember>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

 private:
  std::string label_;
  std::vector<FamilyMember> members_;
};

struct SearchOptions {
  /// 0 scores the stored edge order only; R >= 1 averages over R random
  /// orders shared by every member.
  std::size_t num_orders = 0;
  Seed seed{};
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 1;
};

struct ScoreRow {
  std::int64_t parameter = 0;
  std::size_t num_blocks = 0;
  double mean_code_length = 0.0;
  double mean_prediction_probability = 0.0;
  std::vector<double> per_order;  // empty when scoring the stored order
};

struct SearchResult {
  std::size_t winner_index = 0;
  std::int64_t winner_parameter = 0;
  Partition winner;
  std::vector<ScoreRow> scores;  // in family order
  bool tie = false;              // another member matched the winning score
};

/// Estimator B* = argmin_B code_len(E, B) over an explicit family. Ties go to
/// the earliest member and set `tie`.
SearchResult best_partition(const EdgeList& edges, const PartitionFamily& family,
                            const SearchOptions& options = {});

/// 1, 2, 4, ..., 2^depth consecutive equal blocks. Throws Error{Divisibility}.
PartitionFamily dyadic_family(std::size_t n, unsigned depth);

/// B(c) = ({0..c-1}, {c..n-1}) for c = 0, step, 2 step, ... <= n; empty blocks
/// are dropped so both ends give the singleton partition.
PartitionFamily cut_family(std::size_t n, std::size_t step);

/// B(o) = ({o..o+n/2-1}, rest) for o = 0, step, ... <= max_offset.
/// Throws Error{Bound} when max_offset + n/2 > n, Error{Parity} for odd n.
PartitionFamily offset_family(std::size_t n, std::size_t step,
                              std::size_t max_offset);

/// Each node gets one of k labels uniformly at random; unused labels are
/// dropped, so the result may have fewer than k blocks.
Partition random_partition(std::size_t n, std::size_t k, Seed seed);

/// Splits every block of size >= 2 into two non-empty parts, uniformly over
/// its non-trivial bipartitions. Blocks of size 1 are kept.
Partition random_refinement(const Partition& partition, Seed seed);

/// Original partition (consecutive ranges per sizes_a) and its block
/// inversion (consecutive ranges per sizes_b). Throws Error{SizeSum}.
struct PartitionPair {
  Partition original;
  Partition inverse;
};
PartitionPair inverse_partition(const std::vector<std::size_t>& sizes_a,
                                const std::vector<std::size_t>& sizes_b,
                                std::size_t n);

/// Block sizes of the inversion of (big, small, small, ...): the big block cut
/// into pieces of the small size, followed by all small blocks merged.
/// Throws Error{Divisibility} if the small blocks differ in size or the
/// small size does not divide the big one.
std::vector<std::size_t> inverted_sizes(const std::vector<std::size_t>& sizes);

}  // namespace ebsbm
