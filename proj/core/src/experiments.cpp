#include "ebsbm/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "ebsbm/error.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/io.hpp"
#include "ebsbm/parallel.hpp"
#include "ebsbm/prequential.hpp"
#include "ebsbm/search.hpp"

namespace ebsbm::experiments {

using nlohmann::json;

namespace {

const std::vector<std::pair<Kind, std::string>>& kind_names() {
  static const std::vector<std::pair<Kind, std::string>> names{
      {Kind::Trace, "trace"},
      {Kind::RefinementSweep, "refinement-sweep"},
      {Kind::FuzzySweep, "fuzzy-sweep"},
      {Kind::CutOffsetSweep, "cut-offset-sweep"},
      {Kind::MergeSplit, "merge-split"},
      {Kind::Zkc, "zkc"},
      {Kind::Evaluate, "evaluate"},
  };
  return names;
}

[[noreturn]] void config_fail(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Config, "config field '" + field + "': " + what);
}

bool uses_generated_graphs(Kind kind) {
  return kind == Kind::RefinementSweep || kind == Kind::FuzzySweep ||
         kind == Kind::CutOffsetSweep || kind == Kind::MergeSplit;
}

std::string format_name(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

json metadata_for(const ExperimentConfig& config) {
  return json{{"tool", kToolName},
              {"version", kToolVersion},
              {"config", to_json(config)}};
}

// Scores one partition either on the stored order or averaged over `orders`.
Score score_with(const EdgeList& edges, const Partition& partition,
                 const std::vector<std::vector<std::size_t>>& orders) {
  if (orders.empty()) return score(edges, partition);
  const auto averaged = averaged_code_length(edges, partition, orders);
  return Score{averaged.mean_code_length, averaged.mean_prediction_probability};
}

std::vector<std::vector<std::size_t>> shared_orders(const ExperimentConfig& config,
                                                    std::size_t m, Seed seed) {
  if (config.orders == 0) return {};
  return edge_orders(m, config.orders, seed);
}

std::vector<ResultRow> family_rows(const EdgeList& edges,
                                   const PartitionFamily& family,
                                   std::size_t replicate, const std::string& group,
                                   std::size_t orders, Seed order_seed) {
  SearchOptions options;
  options.num_orders = orders;
  options.seed = order_seed;
  options.threads = 1;
  const auto result = best_partition(edges, family, options);
  std::vector<ResultRow> rows;
  rows.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& score_row = result.scores[i];
    rows.push_back(ResultRow{replicate, group, score_row.parameter,
                             family.label() + ":" + std::to_string(score_row.parameter),
                             score_row.num_blocks, score_row.mean_code_length,
                             score_row.mean_prediction_probability,
                             i == result.winner_index});
  }
  return rows;
}

std::vector<ResultRow> flatten(std::vector<std::vector<ResultRow>> chunks) {
  std::vector<ResultRow> rows;
  for (auto& chunk : chunks) {
    rows.insert(rows.end(), std::make_move_iterator(chunk.begin()),
                std::make_move_iterator(chunk.end()));
  }
  return rows;
}

// {group: {winning parameter: replicate count}}
json winner_histogram(const std::vector<ResultRow>& rows) {
  std::map<std::string, std::map<std::string, int>> counts;
  for (const auto& row : rows) {
    if (row.winner) ++counts[row.group][std::to_string(row.parameter)];
  }
  json out = json::object();
  for (const auto& [group, histogram] : counts) out[group] = histogram;
  return out;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::pair<std::string, Partition>> read_named_partitions(
    const ExperimentConfig& config, std::size_t n) {
  std::vector<std::pair<std::string, Partition>> out;
  for (const auto& named : config.partition_files) {
    out.emplace_back(named.name, io::read_partition(named.path, n));
  }
  return out;
}

template <typename T>
void read_field(const json& value, const std::string& key, T& target) {
  try {
    target = value.get<T>();
  } catch (const json::exception& e) {
    config_fail(key, e.what());
  }
}

}  // namespace

std::string to_string(Kind kind) {
  for (const auto& [k, name] : kind_names()) {
    if (k == kind) return name;
  }
  return "unknown";
}

Kind parse_kind(const std::string& text) {
  for (const auto& [k, name] : kind_names()) {
    if (name == text) return k;
  }
  config_fail("kind", "unknown experiment kind '" + text + "'");
}

ExperimentConfig default_config(Kind kind) {
  ExperimentConfig config;
  config.kind = kind;
  switch (kind) {
    case Kind::RefinementSweep:
      break;
    case Kind::FuzzySweep:
      config.blocks = 2;
      config.depth = 5;
      break;
    case Kind::CutOffsetSweep:
      config.blocks = 2;
      break;
    case Kind::MergeSplit:
      config.n = 12;
      config.m = 378;
      config.sizes = {6, 3, 3};
      config.probs = {0.026, 0.003, 0.003};
      config.replicates = 100;
      break;
    case Kind::Zkc:
      config.n = 34;
      config.m = 0;
      config.edges_file = "data/karate/edges.txt";
      config.partition_files = {{"B100", "data/karate/b100_sociological.txt"},
                                {"B200", "data/karate/b200_louvain.txt"},
                                {"B300", "data/karate/b300_min_entropy.txt"}};
      break;
    case Kind::Evaluate:
    case Kind::Trace:
      config.orders = 0;
      break;
  }
  return config;
}

void validate(const ExperimentConfig& config) {
  const auto& c = config;
  if (uses_generated_graphs(c.kind)) {
    if (c.n == 0) config_fail("n", "must be positive");
    if (c.m == 0) config_fail("m", "must be positive");
    if (c.replicates == 0) config_fail("replicates", "must be positive");
  }
  switch (c.kind) {
    case Kind::RefinementSweep:
      if (c.blocks == 0 || c.n % c.blocks != 0) {
        config_fail("blocks", "must divide n = " + std::to_string(c.n));
      }
      [[fallthrough]];
    case Kind::FuzzySweep:
      if (c.depth >= 63 || c.n % (std::size_t{1} << c.depth) != 0) {
        config_fail("depth", "2^depth must divide n = " + std::to_string(c.n));
      }
      if (c.kind == Kind::FuzzySweep) {
        if (c.n % 2 != 0) config_fail("n", "must be even");
        if (c.mixing_indices.empty()) config_fail("mixing_indices", "must not be empty");
        for (unsigned i : c.mixing_indices) {
          if (i > 9) config_fail("mixing_indices", "values must be in 0..9");
        }
      }
      break;
    case Kind::CutOffsetSweep:
      if (c.n % 2 != 0) config_fail("n", "must be even");
      if (c.cut_step == 0) config_fail("cut_step", "must be positive");
      if (c.offset_step == 0) config_fail("offset_step", "must be positive");
      if (c.max_offset + c.n / 2 > c.n) config_fail("max_offset", "must be at most n/2");
      break;
    case Kind::MergeSplit: {
      if (c.sizes.empty()) config_fail("sizes", "must not be empty");
      if (c.sizes.size() != c.probs.size()) {
        config_fail("probs", "needs one probability per block size");
      }
      if (std::accumulate(c.sizes.begin(), c.sizes.end(), std::size_t{0}) != c.n) {
        config_fail("sizes", "must sum to n = " + std::to_string(c.n));
      }
      if (std::find(c.sizes.begin(), c.sizes.end(), 0) != c.sizes.end()) {
        config_fail("sizes", "must all be positive");
      }
      if (!c.inverse_sizes.empty() &&
          std::accumulate(c.inverse_sizes.begin(), c.inverse_sizes.end(),
                          std::size_t{0}) != c.n) {
        config_fail("inverse_sizes", "must sum to n = " + std::to_string(c.n));
      }
      break;
    }
    case Kind::Zkc:
      if (c.edges_file.empty()) config_fail("edges_file", "is required");
      if (c.random_partitions == 0) config_fail("random_partitions", "must be positive");
      if (c.max_random_blocks == 0) config_fail("max_random_blocks", "must be positive");
      break;
    case Kind::Evaluate:
    case Kind::Trace:
      if (c.edges_file.empty()) config_fail("edges_file", "is required");
      if (c.partition_files.empty()) config_fail("partition_files", "needs at least one entry");
      break;
  }
  std::set<std::string> names;
  for (const auto& named : c.partition_files) {
    if (named.name.empty()) config_fail("partition_files", "every entry needs a name");
    if (!names.insert(named.name).second) {
      config_fail("partition_files", "duplicate name '" + named.name + "'");
    }
  }
}

json to_json(const ExperimentConfig& c) {
  json files = json::array();
  for (const auto& named : c.partition_files) {
    files.push_back({{"name", named.name}, {"path", named.path}});
  }
  return json{{"kind", to_string(c.kind)},
              {"n", c.n},
              {"m", c.m},
              {"blocks", c.blocks},
              {"depth", c.depth},
              {"mixing_indices", c.mixing_indices},
              {"cut_step", c.cut_step},
              {"offset_step", c.offset_step},
              {"max_offset", c.max_offset},
              {"sizes", c.sizes},
              {"probs", c.probs},
              {"inverse_sizes", c.inverse_sizes},
              {"renormalize", c.renormalize},
              {"replicates", c.replicates},
              {"seed", c.seed},
              {"orders", c.orders},
              {"edges_file", c.edges_file},
              {"partition_files", files},
              {"symmetrize", c.symmetrize},
              {"random_partitions", c.random_partitions},
              {"max_random_blocks", c.max_random_blocks},
              {"refinements", c.refinements},
              {"out_dir", c.out_dir},
              {"format", format_name(c.format)}};
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) config_fail("<root>", "config must be a JSON object");
  if (!j.contains("kind")) config_fail("kind", "is required");
  std::string kind_text;
  read_field(j.at("kind"), "kind", kind_text);
  ExperimentConfig c = default_config(parse_kind(kind_text));
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") continue;
    if (key == "n") read_field(value, key, c.n);
    else if (key == "m") read_field(value, key, c.m);
    else if (key == "blocks") read_field(value, key, c.blocks);
    else if (key == "depth") read_field(value, key, c.depth);
    else if (key == "mixing_indices") read_field(value, key, c.mixing_indices);
    else if (key == "cut_step") read_field(value, key, c.cut_step);
    else if (key == "offset_step") read_field(value, key, c.offset_step);
    else if (key == "max_offset") read_field(value, key, c.max_offset);
    else if (key == "sizes") read_field(value, key, c.sizes);
    else if (key == "probs") read_field(value, key, c.probs);
    else if (key == "inverse_sizes") read_field(value, key, c.inverse_sizes);
    else if (key == "renormalize") read_field(value, key, c.renormalize);
    else if (key == "replicates") read_field(value, key, c.replicates);
    else if (key == "seed") read_field(value, key, c.seed);
    else if (key == "orders") read_field(value, key, c.orders);
    else if (key == "edges_file") read_field(value, key, c.edges_file);
    else if (key == "symmetrize") read_field(value, key, c.symmetrize);
    else if (key == "random_partitions") read_field(value, key, c.random_partitions);
    else if (key == "max_random_blocks") read_field(value, key, c.max_random_blocks);
    else if (key == "refinements") read_field(value, key, c.refinements);
    else if (key == "out_dir") read_field(value, key, c.out_dir);
    else if (key == "partition_files") {
      if (!value.is_array()) config_fail(key, "must be an array of {name, path}");
      c.partition_files.clear();
      for (const auto& entry : value) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("path")) {
          config_fail(key, "entries need 'name' and 'path'");
        }
        NamedPath named;
        read_field(entry.at("name"), key + ".name", named.name);
        read_field(entry.at("path"), key + ".path", named.path);
        c.partition_files.push_back(std::move(named));
      }
    } else if (key == "format") {
      std::string text;
      read_field(value, key, text);
      if (text == "csv") c.format = OutputFormat::Csv;
      else if (text == "json") c.format = OutputFormat::Json;
      else config_fail(key, "must be 'csv' or 'json'");
    } else {
      config_fail(key, "unknown field");
    }
  }
  validate(c);
  return c;
}

ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Config, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void mark_winners(std::vector<ResultRow>& rows) {
  std::map<std::pair<std::size_t, std::string>, std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].winner = false;
    const auto key = std::make_pair(rows[i].replicate, rows[i].group);
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, i);
    } else if (rows[i].mean_code_length < rows[it->second].mean_code_length) {
      it->second = i;
    }
  }
  for (const auto& [key, index] : best) rows[index].winner = true;
}

void write_csv(const ResultTable& table, std::ostream& out) {
  out << "# " << table.metadata.dump() << '\n';
  out << "replicate,group,parameter,label,num_blocks,mean_code_length,"
         "mean_prediction_probability,winner\n";
  for (const auto& row : table.rows) {
    out << row.replicate << ',' << csv_field(row.group) << ',' << row.parameter
        << ',' << csv_field(row.label) << ',' << row.num_blocks << ','
        << io::format_double(row.mean_code_length) << ','
        << io::format_double(row.mean_prediction_probability) << ','
        << (row.winner ? 1 : 0) << '\n';
  }
}

void write_json(const ResultTable& table, std::ostream& out) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"replicate", row.replicate},
                    {"group", row.group},
                    {"parameter", row.parameter},
                    {"label", row.label},
                    {"num_blocks", row.num_blocks},
                    {"mean_code_length", row.mean_code_length},
                    {"mean_prediction_probability", row.mean_prediction_probability},
                    {"winner", row.winner}});
  }
  out << json{{"metadata", table.metadata}, {"rows", rows}}.dump(2) << '\n';
}

void write_csv(const TraceTable& table, std::ostream& out) {
  out << "# " << table.metadata.dump() << '\n';
  out << "partition,x,probability,code_length\n";
  for (const auto& row : table.rows) {
    out << csv_field(row.label) << ',' << row.x << ','
        << io::format_double(row.probability) << ','
        << io::format_double(row.code_length) << '\n';
  }
}

void write_json(const TraceTable& table, std::ostream& out) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"partition", row.label},
                    {"x", row.x},
                    {"probability", row.probability},
                    {"code_length", row.code_length}});
  }
  out << json{{"metadata", table.metadata}, {"rows", rows}}.dump(2) << '\n';
}

ResultTable run_refinement_sweep(const ExperimentConfig& config,
                                 const RunOptions& options) {
  validate(config);
  const EdgeSampler sampler(diagonal_model(config.n, config.blocks));
  const auto family = dyadic_family(config.n, config.depth);
  std::vector<std::vector<ResultRow>> chunks(config.replicates);
  parallel_for(config.replicates, options.threads, [&](std::size_t r) {
    const auto edges =
        sampler.sample(config.m, Streams::of(config.seed, Streams::kGraphs).derive(r));
    chunks[r] = family_rows(edges, family, r, family.label(), config.orders,
                            Streams::of(config.seed, Streams::kOrders).derive(r));
  });
  ResultTable table{metadata_for(config), flatten(std::move(chunks))};
  table.metadata["summary"] = {{"winners", winner_histogram(table.rows)}};
  return table;
}

ResultTable run_fuzzy_sweep(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const auto family = dyadic_family(config.n, config.depth);
  const std::size_t tasks = config.mixing_indices.size() * config.replicates;
  std::vector<std::vector<ResultRow>> chunks(tasks);
  parallel_for(tasks, options.threads, [&](std::size_t t) {
    const unsigned index = config.mixing_indices[t / config.replicates];
    const std::size_t r = t % config.replicates;
    const EdgeSampler sampler(mixing_model(config.n, index));
    const auto edges = sampler.sample(
        config.m, Streams::of(config.seed, Streams::kGraphs).derive(index).derive(r));
    chunks[t] = family_rows(
        edges, family, r, "mixing=" + std::to_string(index), config.orders,
        Streams::of(config.seed, Streams::kOrders).derive(index).derive(r));
  });
  ResultTable table{metadata_for(config), flatten(std::move(chunks))};
  table.metadata["summary"] = {{"winners", winner_histogram(table.rows)}};
  return table;
}

ResultTable run_cut_offset_sweep(const ExperimentConfig& config,
                                 const RunOptions& options) {
  validate(config);
  const EdgeSampler sampler(mixing_model(config.n, 0));
  const auto cuts = cut_family(config.n, config.cut_step);
  const auto offsets = offset_family(config.n, config.offset_step, config.max_offset);
  std::vector<std::vector<ResultRow>> chunks(config.replicates);
  parallel_for(config.replicates, options.threads, [&](std::size_t r) {
    const auto edges =
        sampler.sample(config.m, Streams::of(config.seed, Streams::kGraphs).derive(r));
    const Seed order_seed = Streams::of(config.seed, Streams::kOrders).derive(r);
    auto rows = family_rows(edges, cuts, r, cuts.label(), config.orders, order_seed);
    auto more = family_rows(edges, offsets, r, offsets.label(), config.orders, order_seed);
    rows.insert(rows.end(), more.begin(), more.end());
    chunks[r] = std::move(rows);
  });
  ResultTable table{metadata_for(config), flatten(std::move(chunks))};
  table.metadata["summary"] = {{"winners", winner_histogram(table.rows)}};
  return table;
}

ResultTable run_merge_split(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  const auto model =
      heterogeneous_model(config.n, config.sizes, config.probs, config.renormalize);
  const EdgeSampler sampler(model);
  const auto inverse = config.inverse_sizes.empty() ? inverted_sizes(config.sizes)
                                                    : config.inverse_sizes;
  const auto pair = inverse_partition(config.sizes, inverse, config.n);
  const PartitionFamily family(
      "merge-split", {{0, pair.original}, {1, pair.inverse}});
  const bool identical = pair.original.same_grouping(pair.inverse);
  SquareMatrix<double> raw(config.sizes.size(), 0.0);
  for (std::size_t i = 0; i < config.sizes.size(); ++i) raw(i, i) = config.probs[i];
  const double raw_mass = BlockMatrix::mass(pair.original, raw);

  std::vector<std::vector<ResultRow>> chunks(config.replicates);
  parallel_for(config.replicates, options.threads, [&](std::size_t r) {
    const auto edges =
        sampler.sample(config.m, Streams::of(config.seed, Streams::kGraphs).derive(r));
    auto rows = family_rows(edges, family, r, family.label(), config.orders,
                            Streams::of(config.seed, Streams::kOrders).derive(r));
    rows[0].label = "original";
    rows[1].label = "inverse";
    chunks[r] = std::move(rows);
  });
  ResultTable table{metadata_for(config), flatten(std::move(chunks))};

  std::size_t correct = 0;
  std::size_t ties = 0;
  for (std::size_t r = 0; r < config.replicates; ++r) {
    const double original = table.rows[2 * r].mean_code_length;
    const double inverted = table.rows[2 * r + 1].mean_code_length;
    if (identical || original == inverted) ++ties;
    else if (original < inverted) ++correct;
  }
  const std::size_t decided = config.replicates - ties;
  json summary{{"correct", correct},
               {"ties", ties},
               {"decided", decided},
               {"identical_partitions", identical},
               {"raw_mass", raw_mass}};
  summary["percentage_correct"] =
      decided == 0 ? json(nullptr)
                   : json(100.0 * static_cast<double>(correct) / static_cast<double>(decided));
  table.metadata["summary"] = summary;
  return table;
}

ResultTable run_zkc(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  auto edges = io::read_edge_list(config.edges_file);
  if (config.symmetrize) edges = io::symmetrized(edges);
  if (edges.empty()) throw Error(ErrorKind::EmptyEdgeList, "ZKC edge list is empty");
  const std::size_t n = edges.num_nodes();
  const auto named = read_named_partitions(config, n);
  const auto orders =
      shared_orders(config, edges.size(), Streams::of(config.seed, Streams::kOrders));

  struct Parent {
    std::string group;
    std::size_t replicate;
    std::int64_t parameter;
    std::string label;
    Partition partition;
    std::uint64_t refinement_key;
  };
  std::vector<Parent> parents;
  for (std::size_t i = 0; i < named.size(); ++i) {
    parents.push_back({"named", i, static_cast<std::int64_t>(i), named[i].first,
                       named[i].second, i});
  }
  const std::size_t max_k = std::min(config.max_random_blocks, n);
  for (std::size_t j = 0; j < config.random_partitions; ++j) {
    CounterRng k_rng(Streams::of(config.seed, Streams::kRandomBlockCounts).derive(j));
    const std::size_t k = 1 + uniform_below(k_rng, max_k);
    parents.push_back(
        {"random", j, static_cast<std::int64_t>(k), "random-" + std::to_string(j),
         random_partition(n, k, Streams::of(config.seed, Streams::kRandomPartitions).derive(j)),
         (std::uint64_t{1} << 32) + j});
  }

  std::vector<std::vector<ResultRow>> chunks(parents.size());
  parallel_for(parents.size(), options.threads, [&](std::size_t t) {
    const auto& parent = parents[t];
    std::vector<ResultRow> rows;
    const Score own = score_with(edges, parent.partition, orders);
    rows.push_back({parent.replicate, parent.group, parent.parameter, parent.label,
                    parent.partition.num_blocks(), own.mean_code_length,
                    own.mean_prediction_probability, false});
    const Seed refinement_seed =
        Streams::of(config.seed, Streams::kRefinements).derive(parent.refinement_key);
    for (std::size_t s = 0; s < config.refinements; ++s) {
      const auto refined = random_refinement(parent.partition, refinement_seed.derive(s));
      const Score sc = score_with(edges, refined, orders);
      rows.push_back({parent.replicate, parent.group + "-refinement",
                      static_cast<std::int64_t>(s),
                      parent.label + "/refinement-" + std::to_string(s),
                      refined.num_blocks(), sc.mean_code_length,
                      sc.mean_prediction_probability, false});
    }
    chunks[t] = std::move(rows);
  });

  // Named partitions and random partitions each form one comparison group;
  // refinements are compared among siblings of the same parent.
  std::vector<ResultRow> rows = flatten(chunks);
  std::vector<ResultRow> keyed = rows;
  for (auto& row : keyed) {
    if (row.group == "named" || row.group == "random") row.replicate = 0;
  }
  mark_winners(keyed);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].winner = keyed[i].winner;

  std::vector<double> random_scores;
  for (const auto& chunk : chunks) {
    if (chunk.front().group == "random") random_scores.push_back(chunk.front().mean_code_length);
  }
  const double random_median = median(random_scores);
  json named_summary = json::array();
  for (std::size_t i = 0; i < named.size(); ++i) {
    const auto& chunk = chunks[i];
    const double own = chunk.front().mean_code_length;
    std::size_t better = 0;
    for (std::size_t s = 1; s < chunk.size(); ++s) {
      if (chunk[s].mean_code_length < own) ++better;
    }
    named_summary.push_back({{"label", named[i].first},
                             {"mean_code_length", own},
                             {"below_random_median", own < random_median},
                             {"refinements_better", better},
                             {"refinements", config.refinements}});
  }
  ResultTable table{metadata_for(config), std::move(rows)};
  table.metadata["summary"] = {{"num_nodes", n},
                               {"num_edges", edges.size()},
                               {"random_median", random_median},
                               {"named", named_summary}};
  return table;
}

ResultTable run_evaluate(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  auto edges = io::read_edge_list(config.edges_file);
  if (edges.empty()) throw Error(ErrorKind::EmptyEdgeList, "edge list is empty");
  const auto named = read_named_partitions(config, edges.num_nodes());
  const auto orders =
      shared_orders(config, edges.size(), Streams::of(config.seed, Streams::kOrders));
  std::vector<ResultRow> rows(named.size());
  parallel_for(named.size(), options.threads, [&](std::size_t i) {
    const Score s = score_with(edges, named[i].second, orders);
    rows[i] = ResultRow{0, "evaluate", static_cast<std::int64_t>(i), named[i].first,
                        named[i].second.num_blocks(), s.mean_code_length,
                        s.mean_prediction_probability, false};
  });
  mark_winners(rows);
  ResultTable table{metadata_for(config), std::move(rows)};
  table.metadata["summary"] = {{"num_nodes", edges.num_nodes()},
                               {"num_edges", edges.size()}};
  return table;
}

TraceTable run_trace(const ExperimentConfig& config) {
  validate(config);
  const auto edges = io::read_edge_list(config.edges_file);
  if (edges.empty()) throw Error(ErrorKind::EmptyEdgeList, "edge list is empty");
  const auto named = read_named_partitions(config, edges.num_nodes());
  TraceTable table{metadata_for(config), {}};
  json summary = json::array();
  for (const auto& [name, partition] : named) {
    const auto report = evaluate(edges, partition, name);
    for (std::size_t x = 0; x < edges.size(); ++x) {
      table.rows.push_back({name, x + 1, report.probability_trace[x],
                            report.code_length_trace[x]});
    }
    summary.push_back({{"label", name},
                       {"mean_code_length", report.mean_code_length},
                       {"mean_prediction_probability",
                        report.mean_prediction_probability}});
  }
  table.metadata["summary"] = summary;
  return table;
}

ResultTable run(const ExperimentConfig& config, const RunOptions& options) {
  switch (config.kind) {
    case Kind::RefinementSweep: return run_refinement_sweep(config, options);
    case Kind::FuzzySweep: return run_fuzzy_sweep(config, options);
    case Kind::CutOffsetSweep: return run_cut_offset_sweep(config, options);
    case Kind::MergeSplit: return run_merge_split(config, options);
    case Kind::Zkc: return run_zkc(config, options);
    case Kind::Evaluate: return run_evaluate(config, options);
    case Kind::Trace: break;
  }
  throw Error(ErrorKind::Config, "use run_trace() for trace experiments");
}

namespace {

template <typename Table>
std::filesystem::path write_table(const ExperimentConfig& config, const Table& table) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + config.out_dir + ": " + ec.message());
  const auto path = std::filesystem::path(config.out_dir) /
                    (to_string(config.kind) + "." + format_name(config.format));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  if (config.format == OutputFormat::Csv) write_csv(table, out);
  else write_json(table, out);
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
  return path;
}

}  // namespace

std::filesystem::path write_result(const ExperimentConfig& config,
                                   const ResultTable& table) {
  return write_table(config, table);
}

std::filesystem::path write_result(const ExperimentConfig& config,
                                   const TraceTable& table) {
  return write_table(config, table);
}

std::string summarize(const ResultTable& table) {
  std::ostringstream out;
  const auto& config = table.metadata.at("config");
  out << "experiment: " << config.at("kind").get<std::string>() << " (seed "
      << config.at("seed").get<std::uint64_t>() << ", " << table.rows.size()
      << " rows)\n";
  if (table.metadata.contains("summary")) {
    out << "summary: " << table.metadata.at("summary").dump() << '\n';
  }
  return out.str();
}

EdgeSbm build_model(const ModelSpec& spec) {
  if (spec.type == "diagonal") return diagonal_model(spec.n, spec.blocks);
  if (spec.type == "mixing") return mixing_model(spec.n, spec.mixing_index);
  if (spec.type == "heterogeneous") {
    return heterogeneous_model(spec.n, spec.sizes, spec.probs, spec.renormalize);
  }
  config_fail("model", "unknown model type '" + spec.type +
                           "' (expected diagonal, mixing or heterogeneous)");
}

json to_json(const ModelSpec& spec) {
  json out{{"type", spec.type}, {"n", spec.n}};
  if (spec.type == "diagonal") out["blocks"] = spec.blocks;
  if (spec.type == "mixing") out["mixing_index"] = spec.mixing_index;
  if (spec.type == "heterogeneous") {
    out["sizes"] = spec.sizes;
    out["probs"] = spec.probs;
    out["renormalize"] = spec.renormalize;
  }
  return out;
}

}  // namespace ebsbm::experiments
