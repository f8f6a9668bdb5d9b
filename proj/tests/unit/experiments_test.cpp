#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ebsbm/error.hpp"
#include "ebsbm/experiments.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/io.hpp"
#include "ebsbm/prequential.hpp"

using namespace ebsbm;
using namespace ebsbm::experiments;

#ifndef EBSBM_TEST_DATA_DIR
#define EBSBM_TEST_DATA_DIR "data"
#endif

namespace {

std::string config_error(const ExperimentConfig& config) {
  try {
    validate(config);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("expected a config error");
  return {};
}

std::string csv_of(const ResultTable& table) {
  std::ostringstream out;
  write_csv(table, out);
  return out.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ebsbm_exp_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

ExperimentConfig zkc_config() {
  auto config = default_config(Kind::Zkc);
  const std::string data = EBSBM_TEST_DATA_DIR;
  config.edges_file = data + "/karate/edges.txt";
  for (auto& named : config.partition_files) {
    named.path = data + "/" + named.path.substr(std::string("data/").size());
  }
  return config;
}

}  // namespace

TEST_CASE("kind names round trip") {
  for (Kind kind : {Kind::Trace, Kind::RefinementSweep, Kind::FuzzySweep,
                    Kind::CutOffsetSweep, Kind::MergeSplit, Kind::Zkc, Kind::Evaluate}) {
    CHECK(parse_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_kind("bogus"), Error);
}

TEST_CASE("default configs validate") {
  for (Kind kind : {Kind::RefinementSweep, Kind::FuzzySweep, Kind::CutOffsetSweep,
                    Kind::MergeSplit, Kind::Zkc}) {
    CHECK_NOTHROW(validate(default_config(kind)));
  }
  const auto ms = default_config(Kind::MergeSplit);
  CHECK(ms.n == 12);
  CHECK(ms.m == 378);
  CHECK(ms.replicates == 100);
  CHECK(default_config(Kind::FuzzySweep).depth == 5);
  CHECK(default_config(Kind::Evaluate).orders == 0);
}

TEST_CASE("config JSON round trip") {
  auto config = default_config(Kind::MergeSplit);
  config.seed = 77;
  config.format = OutputFormat::Json;
  config.inverse_sizes = {3, 3, 6};
  const auto back = config_from_json(to_json(config));
  CHECK(back == config);

  const auto zkc = zkc_config();
  CHECK(config_from_json(to_json(zkc)) == zkc);
}

TEST_CASE("config JSON rejects unknown fields and bad types") {
  auto j = to_json(default_config(Kind::RefinementSweep));
  j["bogus"] = 1;
  CHECK_THROWS_WITH_AS(config_from_json(j), doctest::Contains("bogus"), Error);

  auto k = to_json(default_config(Kind::RefinementSweep));
  k["n"] = "many";
  CHECK_THROWS_WITH_AS(config_from_json(k), doctest::Contains("'n'"), Error);

  nlohmann::json partial{{"kind", "fuzzy-sweep"}, {"seed", 5}};
  const auto filled = config_from_json(partial);
  CHECK(filled.depth == 5);
  CHECK(filled.seed == 5);
}

TEST_CASE("validation names the offending field") {
  auto a = default_config(Kind::RefinementSweep);
  a.blocks = 3;
  CHECK(config_error(a).find("'blocks'") != std::string::npos);

  auto b = default_config(Kind::MergeSplit);
  b.probs.pop_back();
  CHECK(config_error(b).find("'probs'") != std::string::npos);

  auto c = default_config(Kind::CutOffsetSweep);
  c.max_offset = 65;
  CHECK(config_error(c).find("'max_offset'") != std::string::npos);

  auto d = default_config(Kind::FuzzySweep);
  d.mixing_indices = {10};
  CHECK(config_error(d).find("'mixing_indices'") != std::string::npos);

  auto e = default_config(Kind::RefinementSweep);
  e.replicates = 0;
  CHECK(config_error(e).find("'replicates'") != std::string::npos);
}

TEST_CASE("mark_winners picks the earliest minimum per group") {
  std::vector<ResultRow> rows{
      {0, "g", 1, "a", 1, 2.0, 0.1, false}, {0, "g", 2, "b", 2, 1.0, 0.1, false},
      {0, "g", 3, "c", 3, 1.0, 0.1, false}, {1, "g", 1, "a", 1, 5.0, 0.1, true},
      {0, "h", 1, "a", 1, 9.0, 0.1, false}};
  mark_winners(rows);
  CHECK_FALSE(rows[0].winner);
  CHECK(rows[1].winner);
  CHECK_FALSE(rows[2].winner);
  CHECK(rows[3].winner);
  CHECK(rows[4].winner);
}

TEST_CASE("refinement sweep output and determinism") {
  auto config = default_config(Kind::RefinementSweep);
  config.n = 64;
  config.m = 1400;
  config.depth = 4;
  config.replicates = 3;
  config.orders = 2;
  const auto table = run_refinement_sweep(config, {1});
  REQUIRE(table.rows.size() == 3 * 5);
  std::size_t winners = 0;
  for (const auto& row : table.rows) winners += row.winner ? 1 : 0;
  CHECK(winners == 3);
  CHECK(table.metadata.at("summary").at("winners").contains("dyadic"));

  const auto csv = csv_of(table);
  CHECK(csv.starts_with("# {"));
  CHECK(csv.find("\nreplicate,group,parameter,label,num_blocks,mean_code_length,"
                 "mean_prediction_probability,winner\n") != std::string::npos);

  CHECK(csv_of(run_refinement_sweep(config, {3})) == csv);
  config.seed = 2;
  CHECK(csv_of(run_refinement_sweep(config, {1})) != csv);
}

TEST_CASE("fuzzy and cut-offset sweeps produce one winner per group") {
  auto fuzzy = default_config(Kind::FuzzySweep);
  fuzzy.n = 64;
  fuzzy.m = 1000;
  fuzzy.depth = 3;
  fuzzy.mixing_indices = {0, 9};
  fuzzy.replicates = 2;
  fuzzy.orders = 1;
  const auto f = run_fuzzy_sweep(fuzzy, {2});
  CHECK(f.rows.size() == 2 * 2 * 4);
  CHECK(f.metadata.at("summary").at("winners").contains("mixing=9"));

  auto cut = default_config(Kind::CutOffsetSweep);
  cut.n = 32;
  cut.m = 600;
  cut.cut_step = 8;
  cut.offset_step = 4;
  cut.max_offset = 8;
  cut.replicates = 2;
  cut.orders = 0;
  const auto c = run_cut_offset_sweep(cut, {1});
  CHECK(c.rows.size() == 2 * (5 + 3));
  std::size_t winners = 0;
  for (const auto& row : c.rows) winners += row.winner ? 1 : 0;
  CHECK(winners == 4);
}

TEST_CASE("merge-split summary") {
  auto config = default_config(Kind::MergeSplit);
  config.replicates = 5;
  config.orders = 1;
  const auto table = run_merge_split(config, {1});
  REQUIRE(table.rows.size() == 10);
  CHECK(table.rows[0].label == "original");
  CHECK(table.rows[1].label == "inverse");
  const auto& summary = table.metadata.at("summary");
  CHECK(summary.at("correct").get<std::size_t>() + summary.at("ties").get<std::size_t>() <=
        5);
  CHECK(summary.at("raw_mass").get<double>() == doctest::Approx(0.99));
  CHECK_FALSE(summary.at("identical_partitions").get<bool>());

  auto same = default_config(Kind::MergeSplit);
  same.n = 2;
  same.m = 20;
  same.sizes = {1, 1};
  same.probs = {0.5, 0.5};
  same.replicates = 3;
  const auto tied = run_merge_split(same, {1});
  CHECK(tied.metadata.at("summary").at("ties") == 3);
  CHECK(tied.metadata.at("summary").at("percentage_correct").is_null());
}

TEST_CASE("zkc experiment") {
  auto config = zkc_config();
  config.random_partitions = 10;
  config.refinements = 5;
  config.orders = 2;
  const auto table = run_zkc(config, {1});
  CHECK(table.rows.size() == (3 + 10) * 6);
  const auto& summary = table.metadata.at("summary");
  CHECK(summary.at("num_nodes") == 34);
  CHECK(summary.at("num_edges") == 156);
  CHECK(summary.at("named").size() == 3);
  std::size_t named_winners = 0;
  for (const auto& row : table.rows) {
    if (row.group == "named" && row.winner) ++named_winners;
  }
  CHECK(named_winners == 1);

  config.symmetrize = false;
  CHECK(run_zkc(config, {1}).metadata.at("summary").at("num_edges") == 78);
}

TEST_CASE("evaluate and trace") {
  const auto dir = scratch("eval");
  const auto edges = sample_edges(diagonal_model(16, 2), 100, Seed{4, 0});
  io::write_edge_list(edges, dir / "e.txt");
  {
    std::ofstream p(dir / "two.txt");
    io::write_partition(uniform_blocks(16, 2), p);
    std::ofstream q(dir / "one.txt");
    io::write_partition(Partition::singleton(16), q);
  }
  auto config = default_config(Kind::Evaluate);
  config.edges_file = (dir / "e.txt").string();
  config.partition_files = {{"one", (dir / "one.txt").string()},
                            {"two", (dir / "two.txt").string()}};
  config.out_dir = (dir / "out").string();
  const auto table = run_evaluate(config, {1});
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].mean_code_length == score(edges, Partition::singleton(16)).mean_code_length);
  CHECK(table.rows[1].winner);

  const auto path = write_result(config, table);
  CHECK(path.filename() == "evaluate.csv");
  CHECK(std::filesystem::exists(path));

  auto trace_config = config;
  trace_config.kind = Kind::Trace;
  trace_config.format = OutputFormat::Json;
  const auto trace = run_trace(trace_config);
  CHECK(trace.rows.size() == 200);
  CHECK(trace.rows.front().x == 1);
  CHECK(trace.rows.front().probability == doctest::Approx(1.0 / 256));
  const auto trace_path = write_result(trace_config, trace);
  std::ifstream in(trace_path);
  const auto parsed = nlohmann::json::parse(in);
  CHECK(parsed.at("rows").size() == 200);

  config.partition_files[0].path = (dir / "missing.txt").string();
  CHECK_THROWS_AS(run_evaluate(config, {1}), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("read_config reports malformed files") {
  const auto dir = scratch("cfg");
  {
    std::ofstream out(dir / "bad.json");
    out << "{ not json";
  }
  try {
    read_config(dir / "bad.json");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
  }
  {
    std::ofstream out(dir / "good.json");
    out << to_json(default_config(Kind::CutOffsetSweep)).dump();
  }
  CHECK(read_config(dir / "good.json") == default_config(Kind::CutOffsetSweep));
  std::filesystem::remove_all(dir);
}
