#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ebsbm/error.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/prequential.hpp"
#include "oracles.hpp"

using namespace ebsbm;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ebsbm::Error");
  return ErrorKind::Io;
}

PrequentialState state_after(const Partition& partition, std::size_t m,
                             const std::vector<Edge>& prefix) {
  PrequentialState state(partition, m);
  for (const auto& e : prefix) state.advance(e);
  return state;
}

}  // namespace

TEST_CASE("fresh state predicts uniformly") {
  const auto partition = Partition::make(5, {{0, 3}, {1}, {2, 4}});
  const PrequentialState state(partition, 17);
  for (Node u = 0; u < 5; ++u) {
    for (Node v = 0; v < 5; ++v) CHECK(state.probability(u, v) == 1.0 / 25.0);
  }
}

TEST_CASE("single-block predictor is exactly uniform at every step") {
  const auto partition = Partition::singleton(128);
  const auto edges = sample_edges(diagonal_model(128, 4), 200, Seed{1, 1});
  PrequentialState state(partition, edges.size());
  for (const auto& e : edges) {
    CHECK(state.probability(e.src, e.dst) == 1.0 / 16384.0);
    state.advance(e);
  }
}

TEST_CASE("closed form matches the numeric minimizer on the worked instance") {
  const auto partition = Partition::make(4, {{0, 1}, {2, 3}});
  const std::vector<Edge> prefix{{0, 1}, {1, 0}, {0, 2}};
  const auto state = state_after(partition, 6, prefix);
  CHECK(state.counts()(0, 0) == 2);
  CHECK(state.counts()(0, 1) == 1);
  const auto oracle = testing::numeric_predictor(partition, prefix, 6);
  for (BlockIndex i = 0; i < 2; ++i) {
    for (BlockIndex j = 0; j < 2; ++j) {
      CHECK(std::abs(state.block_probability(i, j) - oracle[i * 2 + j]) < 1e-6);
    }
  }
  // (2 + 3*4/16) / (6*4)
  CHECK(state.block_probability(0, 0) == doctest::Approx(2.75 / 24.0).epsilon(1e-15));
}

TEST_CASE("closed form matches the numeric minimizer on random small instances") {
  CounterRng rng(Seed{77, 0});
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testing::random_predictor_instance(rng, 5, 3, 8);
    const auto state = state_after(inst.partition, inst.m, inst.prefix);
    const auto oracle = testing::numeric_predictor(inst.partition, inst.prefix, inst.m);
    const std::size_t p = inst.partition.num_blocks();
    for (BlockIndex i = 0; i < p; ++i) {
      for (BlockIndex j = 0; j < p; ++j) {
        CHECK(std::abs(state.block_probability(i, j) - oracle[i * p + j]) < 1e-6);
      }
    }
  }
}

TEST_CASE("predictor errors") {
  const auto partition = Partition::make(2, {{0}, {1}});
  PrequentialState state(partition, 1);
  CHECK(kind_of([&] { state.probability(0, 2); }) == ErrorKind::Range);
  state.advance({0, 1});
  CHECK(state.exhausted());
  CHECK(kind_of([&] { state.probability(0, 1); }) == ErrorKind::Exhausted);
  CHECK(kind_of([&] { state.advance({0, 1}); }) == ErrorKind::Exhausted);
  CHECK(kind_of([&] { PrequentialState(partition, 0); }) == ErrorKind::EmptyEdgeList);
}

TEST_CASE("advance updates one count") {
  const auto partition = Partition::make(4, {{0, 1}, {2, 3}});
  const PrequentialState start(partition, 5);
  const auto next = start.advanced({0, 0});
  CHECK(next.counts()(0, 0) == 1);
  CHECK(next.consumed() == 1);
  CHECK(start.consumed() == 0);
  CHECK(next.total() == 5);

  const auto edges = sample_edges(diagonal_model(16, 4), 80, Seed{4, 4});
  const auto coarse = uniform_blocks(16, 2);
  PrequentialState state(coarse, edges.size());
  for (const auto& e : edges) state.advance(e);
  CHECK(state.counts() == block_pair_counts(coarse, edges, edges.size()));
}

TEST_CASE("seeing an edge raises its block pair when it beats the uniform share") {
  // n = 4, blocks of 2, m = 4. After edge (0,0): c_00 = 1, x = 1.
  // Before: 1/16. After: (1 + 3*4/16) / (4*4) = 1.75/16 > 1/16.
  const auto partition = Partition::make(4, {{0, 1}, {2, 3}});
  const PrequentialState before(partition, 4);
  const auto after = before.advanced({0, 1});
  CHECK(after.probability(1, 0) > before.probability(1, 0));
  CHECK(after.probability(1, 0) == doctest::Approx(1.75 / 16.0).epsilon(1e-15));
  // An unseen block pair loses mass.
  CHECK(after.probability(2, 3) < before.probability(2, 3));
}

TEST_CASE("every reachable state is normalized") {
  CounterRng rng(Seed{31, 0});
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 30);
    std::vector<std::uint32_t> labels(n);
    const std::size_t k = 1 + uniform_below(rng, 6);
    for (auto& l : labels) l = static_cast<std::uint32_t>(uniform_below(rng, k));
    const auto partition = Partition::from_labels(labels);
    const auto edges = sample_edges(diagonal_model(n, 1), 1 + uniform_below(rng, 300),
                                    Seed{trial + 0ull, 9});
    PrequentialState state(partition, edges.size());
    for (const auto& e : edges) {
      CHECK(std::abs(state.total_mass() - 1.0) < 1e-12);
      state.advance(e);
    }
  }
}

TEST_CASE("evaluate on the singleton partition is exactly 2 log2 n") {
  const auto edges = sample_edges(diagonal_model(128, 2), 2800, Seed{8, 0});
  const auto report = evaluate(edges, Partition::singleton(128), "B0");
  CHECK(report.mean_code_length == 14.0);
  CHECK(report.mean_prediction_probability == 1.0 / 16384.0);
  for (double q : report.probability_trace) CHECK(q == 1.0 / 16384.0);
  CHECK(report.label == "B0");
  CHECK(mean_prediction_probability(edges, Partition::singleton(128)) == 1.0 / 16384.0);

  const auto karate_like = sample_edges(diagonal_model(34, 2), 156, Seed{8, 1});
  const auto r34 = evaluate(karate_like, Partition::singleton(34));
  CHECK(r34.mean_code_length == doctest::Approx(2.0 * std::log2(34.0)).epsilon(1e-14));
}

TEST_CASE("report invariants: means, Jensen gap, additivity") {
  const auto edges = sample_edges(mixing_model(64, 3), 900, Seed{12, 0});
  for (std::size_t k : {1u, 2u, 4u, 16u, 64u}) {
    const auto report = evaluate(edges, uniform_blocks(64, k));
    double bits = 0.0;
    double prob = 0.0;
    for (std::size_t x = 0; x < edges.size(); ++x) {
      CHECK(report.probability_trace[x] > 0.0);
      CHECK(report.probability_trace[x] <= 1.0);
      CHECK(report.code_length_trace[x] == -std::log2(report.probability_trace[x]));
      bits += report.code_length_trace[x];
      prob += report.probability_trace[x];
    }
    const double m = static_cast<double>(edges.size());
    CHECK(std::abs(report.mean_code_length * m - bits) <= 1e-9 * bits);
    CHECK(report.mean_prediction_probability == doctest::Approx(prob / m).epsilon(1e-12));
    CHECK(-std::log2(report.mean_prediction_probability) <= report.mean_code_length);
  }
}

TEST_CASE("traces depend only on the block-pair label sequence") {
  const auto partition = Partition::make(6, {{0, 1, 2}, {3, 4}, {5}});
  const auto edges = sample_edges(diagonal_model(6, 1), 50, Seed{3, 0});
  std::vector<Edge> collapsed;
  for (const auto& e : edges) {
    collapsed.push_back({partition.block(partition.block_of(e.src)).front(),
                         partition.block(partition.block_of(e.dst)).back()});
  }
  const auto a = evaluate(edges, partition);
  const auto b = evaluate(EdgeList(6, collapsed), partition);
  CHECK(a.code_length_trace == b.code_length_trace);
  CHECK(a.probability_trace == b.probability_trace);
}

TEST_CASE("consistent node relabeling leaves the report unchanged") {
  CounterRng rng(Seed{19, 0});
  const auto edges = sample_edges(diagonal_model(20, 4), 300, Seed{19, 1});
  const auto partition = Partition::make(
      20, {{0, 1, 2, 3, 4, 5, 6}, {7, 8, 9}, {10, 11, 12, 13, 14, 15, 16, 17, 18, 19}});
  std::vector<Node> perm(20);
  std::iota(perm.begin(), perm.end(), 0u);
  shuffle(std::span<Node>(perm), rng);
  std::vector<std::vector<Node>> blocks;
  for (const auto& b : partition.blocks()) {
    std::vector<Node> mapped;
    for (Node u : b) mapped.push_back(perm[u]);
    blocks.push_back(mapped);
  }
  std::vector<Edge> mapped_edges;
  for (const auto& e : edges) mapped_edges.push_back({perm[e.src], perm[e.dst]});
  const auto a = evaluate(edges, partition);
  const auto b = evaluate(EdgeList(20, mapped_edges), Partition::make(20, blocks));
  CHECK(a.probability_trace == b.probability_trace);
  CHECK(a.mean_code_length == b.mean_code_length);
  CHECK(a.mean_prediction_probability == b.mean_prediction_probability);
}

TEST_CASE("score and evaluate agree bitwise") {
  const auto edges = sample_edges(diagonal_model(32, 4), 400, Seed{6, 0});
  const auto partition = uniform_blocks(32, 8);
  const auto report = evaluate(edges, partition);
  const auto s = score(edges, partition);
  CHECK(s.mean_code_length == report.mean_code_length);
  CHECK(s.mean_prediction_probability == report.mean_prediction_probability);
}

TEST_CASE("evaluate errors") {
  CHECK(kind_of([] { evaluate(EdgeList(4, {}), Partition::singleton(4)); }) ==
        ErrorKind::EmptyEdgeList);
  CHECK(kind_of([] { evaluate(EdgeList(4, {{0, 1}}), Partition::singleton(5)); }) ==
        ErrorKind::NodeCountMismatch);
  const std::vector<std::size_t> bad_order{0, 0};
  CHECK(kind_of([&] {
          evaluate(EdgeList(4, {{0, 1}, {1, 2}}), Partition::singleton(4), bad_order);
        }) == ErrorKind::Range);
}

TEST_CASE("order averaging") {
  const auto edges = sample_edges(diagonal_model(128, 2), 2800, Seed{21, 0});
  const auto singleton = averaged_code_length(edges, Partition::singleton(128), 5, Seed{3, 0});
  for (double v : singleton.per_order) CHECK(v == 14.0);
  CHECK(singleton.mean_code_length == 14.0);

  const auto two = averaged_code_length(edges, uniform_blocks(128, 2), 10, Seed{3, 0});
  CHECK(two.per_order.size() == 10);
  CHECK(two.min_code_length <= two.mean_code_length);
  CHECK(two.mean_code_length <= two.max_code_length);
  for (double v : two.per_order) CHECK(v < 14.0);

  const auto identity = averaged_code_length(edges, uniform_blocks(128, 2), 1, Seed{3, 0}, true);
  CHECK(identity.mean_code_length == evaluate(edges, uniform_blocks(128, 2)).mean_code_length);

  CHECK(kind_of([&] { averaged_code_length(edges, Partition::singleton(128), 0, Seed{}); }) ==
        ErrorKind::Range);
}

TEST_CASE("uniform graphs gain nothing on average from a finer partition") {
  const auto edges = sample_edges(diagonal_model(128, 1), 2800, Seed{5, 0});
  const double q = mean_prediction_probability(edges, uniform_blocks(128, 4));
  CHECK(q == doctest::Approx(1.0 / 16384.0).epsilon(0.05));
}
