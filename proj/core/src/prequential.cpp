#include "ebsbm/prequential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ebsbm/error.hpp"

namespace ebsbm {

namespace {

__extension__ typedef unsigned __int128 u128;

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double value) noexcept {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// (c n^2 + (m - x) s) / (m s n^2), evaluated on exact integers so that the
// result is correctly rounded whenever both operands fit in 53 bits.
double smoothed_probability(std::uint64_t count, std::uint64_t pair_size,
                            std::uint64_t n_squared, std::uint64_t remaining,
                            double denominator) {
  const u128 numerator =
      u128{count} * n_squared + u128{remaining} * pair_size;
  return static_cast<double>(numerator) / denominator;
}

double predictor_denominator(std::uint64_t m, std::uint64_t pair_size,
                             std::uint64_t n_squared) {
  return static_cast<double>(u128{m} * pair_size * n_squared);
}

void check_inputs(const EdgeList& edges, const Partition& partition) {
  if (edges.empty()) {
    throw Error(ErrorKind::EmptyEdgeList, "cannot evaluate an empty edge list");
  }
  if (edges.num_nodes() != partition.num_nodes()) {
    throw Error(ErrorKind::NodeCountMismatch,
                "edge list has " + std::to_string(edges.num_nodes()) +
                    " nodes but the partition has " +
                    std::to_string(partition.num_nodes()));
  }
}

// One strict prequential pass. `at(k)` yields the k-th edge to encode and
// `sink(k, q, bits)` observes each prediction before its edge is counted.
template <typename EdgeAt, typename Sink>
Score run_pass(std::size_t m, const Partition& partition, EdgeAt at,
               Sink sink) {
  const std::size_t p = partition.num_blocks();
  const auto n = static_cast<std::uint64_t>(partition.num_nodes());
  const std::uint64_t n_squared = n * n;
  const auto labels = partition.labels();

  std::vector<std::uint64_t> pair_size(p * p);
  std::vector<double> denominator(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      const std::uint64_t s = std::uint64_t{partition.block_size(i)} *
                              partition.block_size(j);
      pair_size[i * p + j] = s;
      denominator[i * p + j] = predictor_denominator(m, s, n_squared);
    }
  }
  std::vector<std::uint64_t> counts(p * p, 0);

  CompensatedSum bits_total;
  CompensatedSum probability_total;
  for (std::size_t x = 0; x < m; ++x) {
    const Edge& e = at(x);
    const std::size_t cell = std::size_t{labels[e.src]} * p + labels[e.dst];
    const double q = smoothed_probability(counts[cell], pair_size[cell],
                                          n_squared, m - x, denominator[cell]);
    const double bits = -std::log2(q);
    sink(x, q, bits);
    bits_total.add(bits);
    probability_total.add(q);
    ++counts[cell];
  }
  const auto md = static_cast<double>(m);
  return Score{bits_total.value() / md, probability_total.value() / md};
}

void check_order(std::span<const std::size_t> order, std::size_t m) {
  if (order.size() != m) {
    throw Error(ErrorKind::Range, "edge order has length " +
                                      std::to_string(order.size()) +
                                      ", expected " + std::to_string(m));
  }
  std::vector<bool> seen(m, false);
  for (std::size_t k : order) {
    if (k >= m || seen[k]) {
      throw Error(ErrorKind::Range, "edge order is not a permutation");
    }
    seen[k] = true;
  }
}

}  // namespace

PrequentialState::PrequentialState(Partition partition, std::size_t m)
    : partition_(std::move(partition)),
      counts_(partition_.num_blocks(), 0),
      pair_sizes_(block_pair_sizes(partition_)),
      m_(m) {
  if (m_ == 0) {
    throw Error(ErrorKind::EmptyEdgeList,
                "prequential state needs at least one edge");
  }
}

double PrequentialState::block_probability(BlockIndex i, BlockIndex j) const {
  if (exhausted()) {
    throw Error(ErrorKind::Exhausted,
                "all " + std::to_string(m_) + " edges have been consumed");
  }
  if (i >= counts_.dim() || j >= counts_.dim()) {
    throw Error(ErrorKind::Range, "block index out of range");
  }
  const auto n = static_cast<std::uint64_t>(num_nodes());
  const std::uint64_t s = pair_sizes_(i, j);
  return smoothed_probability(counts_(i, j), s, n * n, m_ - x_,
                              predictor_denominator(m_, s, n * n));
}

double PrequentialState::probability(Node u, Node v) const {
  return block_probability(partition_.block_of(u), partition_.block_of(v));
}

double PrequentialState::total_mass() const {
  CompensatedSum total;
  for (std::size_t i = 0; i < counts_.dim(); ++i) {
    for (std::size_t j = 0; j < counts_.dim(); ++j) {
      total.add(block_probability(static_cast<BlockIndex>(i),
                                  static_cast<BlockIndex>(j)) *
                static_cast<double>(pair_sizes_(i, j)));
    }
  }
  return total.value();
}

void PrequentialState::advance(Edge edge) {
  if (exhausted()) {
    throw Error(ErrorKind::Exhausted,
                "all " + std::to_string(m_) + " edges have been consumed");
  }
  ++counts_(partition_.block_of(edge.src), partition_.block_of(edge.dst));
  ++x_;
}

PrequentialState PrequentialState::advanced(Edge edge) const {
  PrequentialState next = *this;
  next.advance(edge);
  return next;
}

EvaluationReport evaluate(const EdgeList& edges, const Partition& partition,
                          std::string label) {
  std::vector<std::size_t> identity(edges.size());
  std::iota(identity.begin(), identity.end(), std::size_t{0});
  return evaluate(edges, partition, identity, std::move(label));
}

EvaluationReport evaluate(const EdgeList& edges, const Partition& partition,
                          std::span<const std::size_t> order,
                          std::string label) {
  check_inputs(edges, partition);
  check_order(order, edges.size());
  EvaluationReport report;
  report.label = std::move(label);
  report.probability_trace.resize(edges.size());
  report.code_length_trace.resize(edges.size());
  report.edge_order.assign(order.begin(), order.end());
  const Score s = run_pass(
      edges.size(), partition,
      [&](std::size_t k) -> const Edge& { return edges[order[k]]; },
      [&](std::size_t k, double q, double bits) {
        report.probability_trace[k] = q;
        report.code_length_trace[k] = bits;
      });
  report.mean_code_length = s.mean_code_length;
  report.mean_prediction_probability = s.mean_prediction_probability;
  return report;
}

Score score(const EdgeList& edges, const Partition& partition) {
  check_inputs(edges, partition);
  return run_pass(
      edges.size(), partition,
      [&](std::size_t k) -> const Edge& { return edges[k]; },
      [](std::size_t, double, double) {});
}

Score score(const EdgeList& edges, const Partition& partition,
            std::span<const std::size_t> order) {
  check_inputs(edges, partition);
  check_order(order, edges.size());
  return run_pass(
      edges.size(), partition,
      [&](std::size_t k) -> const Edge& { return edges[order[k]]; },
      [](std::size_t, double, double) {});
}

double mean_prediction_probability(const EdgeList& edges,
                                   const Partition& partition) {
  return score(edges, partition).mean_prediction_probability;
}

std::vector<std::vector<std::size_t>> edge_orders(std::size_t m,
                                                  std::size_t num_orders,
                                                  Seed seed,
                                                  bool identity_first) {
  std::vector<std::vector<std::size_t>> orders;
  orders.reserve(num_orders);
  for (std::size_t r = 0; r < num_orders; ++r) {
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (!(identity_first && r == 0)) {
      CounterRng rng(seed.derive(r));
      shuffle(std::span<std::size_t>(order), rng);
    }
    orders.push_back(std::move(order));
  }
  return orders;
}

AveragedScore averaged_code_length(const EdgeList& edges,
                                   const Partition& partition,
                                   std::size_t num_orders, Seed seed,
                                   bool identity_first) {
  if (num_orders == 0) {
    throw Error(ErrorKind::Range, "need at least one edge order");
  }
  check_inputs(edges, partition);
  const auto orders = edge_orders(edges.size(), num_orders, seed, identity_first);
  return averaged_code_length(edges, partition, orders);
}

AveragedScore averaged_code_length(
    const EdgeList& edges, const Partition& partition,
    std::span<const std::vector<std::size_t>> orders) {
  if (orders.empty()) {
    throw Error(ErrorKind::Range, "need at least one edge order");
  }
  AveragedScore out;
  out.per_order.reserve(orders.size());
  CompensatedSum bits;
  CompensatedSum probability;
  for (const auto& order : orders) {
    const Score s = score(edges, partition, order);
    out.per_order.push_back(s.mean_code_length);
    bits.add(s.mean_code_length);
    probability.add(s.mean_prediction_probability);
  }
  const auto r = static_cast<double>(orders.size());
  out.mean_code_length = bits.value() / r;
  out.mean_prediction_probability = probability.value() / r;
  const auto [lo, hi] = std::minmax_element(out.per_order.begin(), out.per_order.end());
  out.min_code_length = *lo;
  out.max_code_length = *hi;
  // Rounding in the division can push the mean a hair outside [min, max].
  out.mean_code_length =
      std::clamp(out.mean_code_length, out.min_code_length, out.max_code_length);
  return out;
}

}  // namespace ebsbm
