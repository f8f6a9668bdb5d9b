#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "ebsbm/error.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/search.hpp"

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

std::vector<std::size_t> sizes_of(const Partition& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) out.push_back(p.block_size(i));
  return out;
}

}  // namespace

TEST_CASE("dyadic_family") {
  const auto family = dyadic_family(128, 7);
  REQUIRE(family.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(family[i].parameter == (1 << i));
    CHECK(family[i].partition.num_blocks() == (1u << i));
  }
  for (std::size_t i = 1; i < family.size(); ++i) {
    CHECK(family[i].partition.refines(family[i - 1].partition));
  }
  CHECK(dyadic_family(128, 0).size() == 1);
  const auto small = dyadic_family(12, 2);
  CHECK(sizes_of(small[0].partition) == std::vector<std::size_t>{12});
  CHECK(sizes_of(small[1].partition) == std::vector<std::size_t>{6, 6});
  CHECK(sizes_of(small[2].partition) == std::vector<std::size_t>{3, 3, 3, 3});
  CHECK(kind_of([] { dyadic_family(12, 3); }) == ErrorKind::Divisibility);
}

TEST_CASE("cut_family") {
  const auto family = cut_family(128, 8);
  CHECK(family.size() == 17);
  CHECK(family[0].partition == Partition::singleton(128));
  CHECK(family[16].partition == Partition::singleton(128));
  CHECK(family[8].parameter == 64);
  CHECK(family[8].partition == uniform_blocks(128, 2));
  CHECK(sizes_of(family[1].partition) == std::vector<std::size_t>{8, 120});
  CHECK(kind_of([] { cut_family(8, 0); }) == ErrorKind::Range);
}

TEST_CASE("offset_family") {
  const auto family = offset_family(128, 4, 32);
  REQUIRE(family.size() == 9);
  CHECK(family[0].partition == uniform_blocks(128, 2));
  const auto& o32 = family[8].partition;
  CHECK(o32.block(0).front() == 32);
  CHECK(o32.block(0).back() == 95);
  CHECK(o32.block(1).size() == 64);
  CHECK(o32.block_of(0) == 1);
  CHECK(o32.block_of(31) == 1);
  CHECK(o32.block_of(96) == 1);
  const auto& o4 = family[1].partition;
  CHECK(sizes_of(o4) == std::vector<std::size_t>{64, 64});
  CHECK(o4.block(0).front() == 4);
  CHECK(kind_of([] { offset_family(128, 4, 65); }) == ErrorKind::Bound);
}

TEST_CASE("random_partition") {
  CHECK(random_partition(34, 1, Seed{9, 9}) == Partition::singleton(34));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = random_partition(34, 5, Seed{s, 0});
    CHECK(p.num_blocks() <= 5);
    CHECK(p.num_nodes() == 34);
  }
  CHECK(random_partition(34, 5, Seed{3, 1}) == random_partition(34, 5, Seed{3, 1}));
  CHECK(kind_of([] { random_partition(4, 0, Seed{}); }) == ErrorKind::Range);
  CHECK(kind_of([] { random_partition(4, 5, Seed{}); }) == ErrorKind::Range);
}

TEST_CASE("random_refinement refines its input") {
  const auto split = random_refinement(Partition::singleton(34), Seed{1, 0});
  CHECK(split.num_blocks() == 2);

  const auto atoms = Partition::from_labels(std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(random_refinement(atoms, Seed{1, 0}) == atoms);

  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto parent = random_partition(34, 1 + s % 5, Seed{s, 1});
    const auto child = random_refinement(parent, Seed{s, 2});
    CHECK(child.refines(parent));
    CHECK(child.num_blocks() >= parent.num_blocks());
    CHECK(child.num_blocks() <= 2 * parent.num_blocks());
  }
}

TEST_CASE("random_refinement is uniform over the bipartitions of a block") {
  // A 3-node block has 3 non-trivial bipartitions.
  std::map<std::vector<std::uint32_t>, int> seen;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const auto child = random_refinement(Partition::singleton(3), Seed{s, 0});
    const auto labels = child.labels();
    seen[std::vector<std::uint32_t>(labels.begin(), labels.end())]++;
  }
  CHECK(seen.size() == 3);
  for (const auto& [labels, count] : seen) CHECK(std::abs(count - 1000) < 120);
}

TEST_CASE("inverse_partition") {
  const auto pair = inverse_partition({6, 3, 3}, inverted_sizes({6, 3, 3}), 12);
  CHECK(pair.original == Partition::make(12, {{0, 1, 2, 3, 4, 5}, {6, 7, 8}, {9, 10, 11}}));
  CHECK(pair.inverse == Partition::make(12, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8, 9, 10, 11}}));

  std::vector<std::size_t> sizes{128};
  for (int i = 0; i < 32; ++i) sizes.push_back(4);
  const auto big = inverse_partition(sizes, inverted_sizes(sizes), 256);
  REQUIRE(big.inverse.num_blocks() == 33);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(big.inverse.block_size(i) == 4);
    CHECK(big.inverse.block(i).back() < 128);
  }
  CHECK(big.inverse.block_size(32) == 128);

  const auto tiny = inverse_partition({1, 1}, inverted_sizes({1, 1}), 2);
  CHECK(tiny.original.same_grouping(tiny.inverse));

  CHECK(kind_of([] { inverse_partition({6, 3}, {3, 6}, 12); }) == ErrorKind::SizeSum);
  CHECK(kind_of([] { inverted_sizes({6, 4, 3}); }) == ErrorKind::Divisibility);
}

TEST_CASE("best_partition") {
  const auto edges = sample_edges(diagonal_model(128, 2), 2800, Seed{50, 0});
  const auto result = best_partition(edges, dyadic_family(128, 5));
  CHECK(result.winner_parameter == 2);
  CHECK(result.winner == uniform_blocks(128, 2));
  CHECK_FALSE(result.tie);
  REQUIRE(result.scores.size() == 6);

  // Every score row equals a standalone evaluation, bit for bit.
  const auto family = dyadic_family(128, 5);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto report = evaluate(edges, family[i].partition);
    CHECK(result.scores[i].mean_code_length == report.mean_code_length);
    CHECK(result.scores[i].mean_prediction_probability == report.mean_prediction_probability);
  }

  const auto uniform = sample_edges(diagonal_model(128, 1), 500, Seed{51, 0});
  const PartitionFamily single("b0", {{1, Partition::singleton(128)}});
  CHECK(best_partition(uniform, single).winner == Partition::singleton(128));

  const auto cuts = best_partition(edges, cut_family(128, 8));
  CHECK(cuts.winner_parameter == 64);
  // c = 0 and c = 128 are both the singleton partition.
  CHECK(cuts.scores.front().mean_code_length == cuts.scores.back().mean_code_length);

  CHECK(kind_of([&] { best_partition(edges, dyadic_family(64, 2)); }) ==
        ErrorKind::NodeCountMismatch);
}

TEST_CASE("best_partition flags ties and keeps the earliest member") {
  const auto edges = sample_edges(diagonal_model(8, 1), 40, Seed{1, 0});
  const PartitionFamily family(
      "same", {{5, Partition::singleton(8)}, {6, Partition::singleton(8)}});
  const auto result = best_partition(edges, family);
  CHECK(result.tie);
  CHECK(result.winner_index == 0);
  CHECK(result.winner_parameter == 5);
}

TEST_CASE("order-averaged search is deterministic and thread-count independent") {
  const auto edges = sample_edges(diagonal_model(64, 4), 1200, Seed{70, 0});
  SearchOptions one{5, Seed{1, 2}, 1};
  SearchOptions many{5, Seed{1, 2}, 4};
  const auto a = best_partition(edges, dyadic_family(64, 4), one);
  const auto b = best_partition(edges, dyadic_family(64, 4), many);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    CHECK(a.scores[i].mean_code_length == b.scores[i].mean_code_length);
    CHECK(a.scores[i].per_order == b.scores[i].per_order);
  }
  CHECK(a.winner_parameter == 4);
}

TEST_CASE("family validation") {
  CHECK(kind_of([] { PartitionFamily("empty", {}); }) == ErrorKind::EmptyPartition);
  CHECK(kind_of([] {
          PartitionFamily("dup", {{1, Partition::singleton(4)}, {1, Partition::singleton(4)}});
        }) == ErrorKind::Range);
  CHECK(kind_of([] {
          PartitionFamily("mixed", {{1, Partition::singleton(4)}, {2, Partition::singleton(5)}});
        }) == ErrorKind::NodeCountMismatch);
}
