#include "ebsbm/search.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "ebsbm/error.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/parallel.hpp"

namespace ebsbm {

PartitionFamily::PartitionFamily(std::string label,
                                 std::vector<FamilyMember> members)
    : label_(std::move(label)), members_(std::move(members)) {
  if (members_.empty()) {
    throw Error(ErrorKind::EmptyPartition,
                "partition family '" + label_ + "' has no members");
  }
  std::set<std::int64_t> parameters;
  const std::size_t n = members_.front().partition.num_nodes();
  for (const auto& member : members_) {
    if (member.partition.num_nodes() != n) {
      throw Error(ErrorKind::NodeCountMismatch,
                  "members of family '" + label_ + "' differ in node count");
    }
    if (!parameters.insert(member.parameter).second) {
      throw Error(ErrorKind::Range, "family '" + label_ + "' repeats parameter " +
                                        std::to_string(member.parameter));
    }
  }
}

SearchResult best_partition(const EdgeList& edges, const PartitionFamily& family,
                            const SearchOptions& options) {
  if (edges.num_nodes() != family.num_nodes()) {
    throw Error(ErrorKind::NodeCountMismatch,
                "edge list has " + std::to_string(edges.num_nodes()) +
                    " nodes but family '" + family.label() + "' has " +
                    std::to_string(family.num_nodes()));
  }
  if (edges.empty()) {
    throw Error(ErrorKind::EmptyEdgeList, "cannot score an empty edge list");
  }
  std::vector<std::vector<std::size_t>> orders;
  if (options.num_orders > 0) {
    orders = edge_orders(edges.size(), options.num_orders, options.seed);
  }

  std::vector<ScoreRow> rows(family.size());
  parallel_for(family.size(), options.threads, [&](std::size_t i) {
    const auto& member = family[i];
    ScoreRow& row = rows[i];
    row.parameter = member.parameter;
    row.num_blocks = member.partition.num_blocks();
    if (orders.empty()) {
      const Score s = score(edges, member.partition);
      row.mean_code_length = s.mean_code_length;
      row.mean_prediction_probability = s.mean_prediction_probability;
    } else {
      auto averaged = averaged_code_length(edges, member.partition, orders);
      row.mean_code_length = averaged.mean_code_length;
      row.mean_prediction_probability = averaged.mean_prediction_probability;
      row.per_order = std::move(averaged.per_order);
    }
  });

  std::size_t winner = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].mean_code_length < rows[winner].mean_code_length) winner = i;
  }
  bool tie = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i != winner && rows[i].mean_code_length == rows[winner].mean_code_length) {
      tie = true;
    }
  }
  return SearchResult{winner, family[winner].parameter, family[winner].partition,
                      std::move(rows), tie};
}

PartitionFamily dyadic_family(std::size_t n, unsigned depth) {
  if (depth >= 63 || n == 0 || n % (std::size_t{1} << depth) != 0) {
    std::ostringstream msg;
    msg << "2^" << depth << " does not divide " << n;
    throw Error(ErrorKind::Divisibility, msg.str());
  }
  std::vector<FamilyMember> members;
  for (unsigned d = 0; d <= depth; ++d) {
    const std::size_t k = std::size_t{1} << d;
    members.push_back({static_cast<std::int64_t>(k), uniform_blocks(n, k)});
  }
  return PartitionFamily("dyadic", std::move(members));
}

namespace {

std::vector<Node> node_range(std::size_t first, std::size_t last) {
  std::vector<Node> out;
  for (std::size_t u = first; u < last; ++u) out.push_back(static_cast<Node>(u));
  return out;
}

}  // namespace

PartitionFamily cut_family(std::size_t n, std::size_t step) {
  if (step == 0) throw Error(ErrorKind::Range, "cut step must be positive");
  std::vector<FamilyMember> members;
  for (std::size_t c = 0; c <= n; c += step) {
    members.push_back({static_cast<std::int64_t>(c),
                       Partition::make(n, {node_range(0, c), node_range(c, n)})});
  }
  return PartitionFamily("cut", std::move(members));
}

PartitionFamily offset_family(std::size_t n, std::size_t step,
                              std::size_t max_offset) {
  if (step == 0) throw Error(ErrorKind::Range, "offset step must be positive");
  if (n == 0 || n % 2 != 0) {
    throw Error(ErrorKind::Parity, "offset family needs an even node count");
  }
  const std::size_t half = n / 2;
  if (max_offset + half > n) {
    std::ostringstream msg;
    msg << "offset " << max_offset << " pushes a block of " << half
        << " past node " << n - 1;
    throw Error(ErrorKind::Bound, msg.str());
  }
  std::vector<FamilyMember> members;
  for (std::size_t o = 0; o <= max_offset; o += step) {
    auto rest = node_range(0, o);
    const auto tail = node_range(o + half, n);
    rest.insert(rest.end(), tail.begin(), tail.end());
    members.push_back({static_cast<std::int64_t>(o),
                       Partition::make(n, {node_range(o, o + half), std::move(rest)})});
  }
  return PartitionFamily("offset", std::move(members));
}

Partition random_partition(std::size_t n, std::size_t k, Seed seed) {
  if (k == 0 || k > n) {
    std::ostringstream msg;
    msg << "block count " << k << " must be in [1, " << n << "]";
    throw Error(ErrorKind::Range, msg.str());
  }
  CounterRng rng(seed);
  std::vector<std::uint32_t> labels(n);
  for (auto& label : labels) {
    label = static_cast<std::uint32_t>(uniform_below(rng, k));
  }
  return Partition::from_labels(labels);
}

Partition random_refinement(const Partition& partition, Seed seed) {
  CounterRng rng(seed);
  std::vector<std::vector<Node>> blocks;
  blocks.reserve(2 * partition.num_blocks());
  std::vector<bool> side;
  for (const auto& block : partition.blocks()) {
    if (block.size() < 2) {
      blocks.push_back(block);
      continue;
    }
    // Uniform over ordered non-trivial splits by rejection; each unordered
    // bipartition appears exactly twice, so it is uniform over those too.
    side.assign(block.size(), false);
    bool mixed = false;
    while (!mixed) {
      std::size_t ones = 0;
      for (std::size_t t = 0; t < block.size(); ++t) {
        side[t] = (rng() >> 63) != 0;
        ones += side[t] ? 1 : 0;
      }
      mixed = ones != 0 && ones != block.size();
    }
    std::vector<Node> first;
    std::vector<Node> second;
    for (std::size_t t = 0; t < block.size(); ++t) {
      // The part holding the block's smallest node comes first.
      (side[t] == side[0] ? first : second).push_back(block[t]);
    }
    blocks.push_back(std::move(first));
    blocks.push_back(std::move(second));
  }
  return Partition::make(partition.num_nodes(), std::move(blocks));
}

PartitionPair inverse_partition(const std::vector<std::size_t>& sizes_a,
                                const std::vector<std::size_t>& sizes_b,
                                std::size_t n) {
  return PartitionPair{consecutive_blocks(n, sizes_a),
                       consecutive_blocks(n, sizes_b)};
}

std::vector<std::size_t> inverted_sizes(const std::vector<std::size_t>& sizes) {
  if (sizes.size() < 2) return sizes;
  const std::size_t big = sizes.front();
  const std::size_t small = sizes[1];
  if (small == 0 || big % small != 0 ||
      std::any_of(sizes.begin() + 1, sizes.end(),
                  [&](std::size_t s) { return s != small; })) {
    throw Error(ErrorKind::Divisibility,
                "block inversion needs one big block followed by equal small "
                "blocks whose size divides the big one");
  }
  std::vector<std::size_t> out(big / small, small);
  out.push_back(std::accumulate(sizes.begin() + 1, sizes.end(), std::size_t{0}));
  return out;
}

}  // namespace ebsbm
