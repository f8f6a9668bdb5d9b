// ebsbm: generate edge-based SBM graphs, score partitions by prequential mean
// code length and run the synthetic / karate-club experiment sweeps.
//
// Exit status: 0 success, 1 configuration error, 2 input/output error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ebsbm/error.hpp"
#include "ebsbm/experiments.hpp"
#include "ebsbm/generator.hpp"
#include "ebsbm/io.hpp"

namespace {

namespace ex = ebsbm::experiments;
using ebsbm::Error;
using ebsbm::ErrorKind;

constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::Parse:
    case ErrorKind::Coverage:
    case ErrorKind::Overlap:
    case ErrorKind::EmptyEdgeList:
    case ErrorKind::NodeCountMismatch:
    case ErrorKind::EmptyPartition:
      return kExitIo;
    default:
      return kExitConfig;
  }
}

// Options shared by every experiment subcommand.
struct CommonOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicates;
  std::optional<std::size_t> orders;
  std::optional<std::string> out;
  std::optional<std::string> format;

  void attach(CLI::App& cmd, bool generated_graphs) {
    cmd.add_option("--seed", seed, "Master seed");
    if (generated_graphs) {
      cmd.add_option("--replicates", replicates, "Number of generated graphs");
    }
    cmd.add_option("--orders", orders,
                   "Random edge orders to average over (0 = stored order)");
    cmd.add_option("--out", out, "Output directory");
    cmd.add_option("--format", format, "Result format")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  void apply(ex::ExperimentConfig& config) const {
    if (seed) config.seed = *seed;
    if (replicates) config.replicates = *replicates;
    if (orders) config.orders = *orders;
    if (out) config.out_dir = *out;
    if (format) {
      config.format = *format == "json" ? ex::OutputFormat::Json : ex::OutputFormat::Csv;
    }
  }
};

// "name=path" or a bare path named after its stem.
ex::NamedPath named_path(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  return {std::filesystem::path(spec).stem().string(), spec};
}

std::vector<ex::NamedPath> named_paths(const std::vector<std::string>& specs) {
  std::vector<ex::NamedPath> out;
  for (const auto& spec : specs) out.push_back(named_path(spec));
  return out;
}

void run_and_report(const ex::ExperimentConfig& config, std::size_t threads) {
  ex::RunOptions options;
  options.threads = threads;
  if (config.kind == ex::Kind::Trace) {
    const auto table = ex::run_trace(config);
    const auto path = ex::write_result(config, table);
    std::cout << "experiment: trace (" << table.rows.size() << " rows)\n"
              << "summary: " << table.metadata.at("summary").dump() << '\n'
              << "wrote " << path.string() << '\n';
    return;
  }
  const auto table = ex::run(config, options);
  const auto path = ex::write_result(config, table);
  std::cout << ex::summarize(table) << "wrote " << path.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-based stochastic block models: generation and "
               "prequential partition scoring"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");

  // generate
  ex::ModelSpec model;
  std::size_t gen_m = 2800;
  std::uint64_t gen_seed = 1;
  std::uint64_t gen_stream = 0;
  std::string gen_out;
  bool gen_raw = false;
  auto* generate = app.add_subcommand("generate", "Sample an edge list from a model");
  generate->add_option("--model", model.type, "diagonal | mixing | heterogeneous")
      ->check(CLI::IsMember({"diagonal", "mixing", "heterogeneous"}));
  generate->add_option("--n", model.n, "Node count");
  generate->add_option("--m", gen_m, "Edge count");
  generate->add_option("--blocks", model.blocks, "Equal blocks (diagonal model)");
  generate->add_option("--mixing-index", model.mixing_index, "0..9 (mixing model)");
  generate->add_option("--sizes", model.sizes, "Block sizes (heterogeneous model)")
      ->delimiter(',');
  generate->add_option("--probs", model.probs,
                       "Within-block probabilities (heterogeneous model)")
      ->delimiter(',');
  generate->add_flag("--no-renormalize", gen_raw,
                     "Reject heterogeneous entries whose mass is not 1");
  generate->add_option("--seed", gen_seed, "Seed value");
  generate->add_option("--stream", gen_stream, "Seed stream id");
  generate->add_option("--out", gen_out, "Edge-list file to write")->required();

  // trace / evaluate
  std::string trace_edges;
  std::vector<std::string> trace_partitions;
  CommonOptions trace_common;
  auto* trace = app.add_subcommand("trace", "Per-edge prediction probabilities");
  trace->add_option("edges", trace_edges, "Edge-list file")->required();
  trace->add_option("partitions", trace_partitions, "Partition files ([name=]path)")
      ->required();
  trace_common.attach(*trace, false);

  std::string eval_edges;
  std::vector<std::string> eval_partitions;
  CommonOptions eval_common;
  auto* evaluate = app.add_subcommand("evaluate", "Mean code length of partitions");
  evaluate->add_option("edges", eval_edges, "Edge-list file")->required();
  evaluate->add_option("partitions", eval_partitions, "Partition files ([name=]path)")
      ->required();
  eval_common.attach(*evaluate, false);

  // sweep
  std::string sweep_kind = "refinement";
  std::optional<std::size_t> sweep_n, sweep_m, sweep_blocks, sweep_cut_step,
      sweep_offset_step, sweep_max_offset;
  std::optional<unsigned> sweep_depth;
  std::vector<unsigned> sweep_mixing;
  CommonOptions sweep_common;
  auto* sweep = app.add_subcommand("sweep", "Score a partition family on generated graphs");
  sweep->add_option("--kind", sweep_kind, "refinement | fuzzy | cut-offset")
      ->check(CLI::IsMember({"refinement", "fuzzy", "cut-offset"}));
  sweep->add_option("--n", sweep_n, "Node count");
  sweep->add_option("--m", sweep_m, "Edge count");
  sweep->add_option("--blocks", sweep_blocks, "Planted blocks (refinement)");
  sweep->add_option("--depth", sweep_depth, "Dyadic family depth");
  sweep->add_option("--mixing", sweep_mixing, "Mixing indices (fuzzy)")->delimiter(',');
  sweep->add_option("--cut-step", sweep_cut_step, "Cut family step");
  sweep->add_option("--offset-step", sweep_offset_step, "Offset family step");
  sweep->add_option("--max-offset", sweep_max_offset, "Largest offset");
  sweep_common.attach(*sweep, true);

  // merge-split
  std::optional<std::size_t> ms_n, ms_m;
  std::vector<std::size_t> ms_sizes, ms_inverse;
  std::vector<double> ms_probs;
  bool ms_raw = false;
  CommonOptions ms_common;
  auto* merge_split = app.add_subcommand(
      "merge-split", "Original vs block-inverted partition on heterogeneous graphs");
  merge_split->add_option("--n", ms_n, "Node count");
  merge_split->add_option("--m", ms_m, "Edge count");
  merge_split->add_option("--sizes", ms_sizes, "Block sizes, big block first")->delimiter(',');
  merge_split->add_option("--probs", ms_probs, "Within-block probabilities")->delimiter(',');
  merge_split->add_option("--inverse-sizes", ms_inverse,
                          "Block sizes of the inverse partition (default: derived)")
      ->delimiter(',');
  merge_split->add_flag("--no-renormalize", ms_raw, "Require exact mass 1");
  ms_common.attach(*merge_split, true);

  // zkc
  std::optional<std::string> zkc_edges;
  std::vector<std::string> zkc_partitions;
  bool zkc_as_is = false;
  bool zkc_symmetrize = false;
  std::optional<std::size_t> zkc_random, zkc_refinements, zkc_max_blocks;
  CommonOptions zkc_common;
  auto* zkc = app.add_subcommand("zkc", "Karate-club partition comparison");
  zkc->add_option("--edges", zkc_edges, "Undirected edge list (default: shipped asset)");
  zkc->add_option("--partition", zkc_partitions, "Named partition file (name=path)");
  auto* sym_flag = zkc->add_flag("--symmetrize", zkc_symmetrize,
                                 "Emit both orientations of every edge (default)");
  zkc->add_flag("--as-is", zkc_as_is, "Use edges in the stored orientation only")
      ->excludes(sym_flag);
  zkc->add_option("--random-partitions", zkc_random, "Random partitions to draw");
  zkc->add_option("--refinements", zkc_refinements, "Random refinements per partition");
  zkc->add_option("--max-blocks", zkc_max_blocks, "Largest random block count");
  zkc_common.attach(*zkc, false);

  // run / config
  std::string run_path;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config file");
  run->add_option("config", run_path, "Config file")->required();
  run->add_option("--out", run_out, "Override the output directory");

  std::string config_kind;
  auto* config_cmd = app.add_subcommand("config", "Print the default config of a kind");
  config_cmd->add_option("kind", config_kind, "Experiment kind")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*generate) {
      model.renormalize = !gen_raw;
      const auto sbm = ex::build_model(model);
      const ebsbm::Seed seed{gen_seed, gen_stream};
      const auto edges = ebsbm::sample_edges(sbm, gen_m, seed);
      ebsbm::io::write_edge_list(edges, gen_out);
      const nlohmann::json meta{
          {"tool", ex::kToolName},
          {"version", ex::kToolVersion},
          {"model", ex::to_json(model)},
          {"m", gen_m},
          {"seed", {{"value", seed.value}, {"stream_id", seed.stream_id}}}};
      const std::string meta_path = gen_out + ".meta.json";
      std::ofstream meta_out(meta_path, std::ios::binary);
      if (!meta_out) throw Error(ErrorKind::Io, "cannot write " + meta_path);
      meta_out << meta.dump(2) << '\n';
      std::cout << "wrote " << edges.size() << " edges on " << edges.num_nodes()
                << " nodes to " << gen_out << '\n';
      return 0;
    }

    ex::ExperimentConfig config;
    if (*trace) {
      config = ex::default_config(ex::Kind::Trace);
      config.edges_file = trace_edges;
      config.partition_files = named_paths(trace_partitions);
      trace_common.apply(config);
    } else if (*evaluate) {
      config = ex::default_config(ex::Kind::Evaluate);
      config.edges_file = eval_edges;
      config.partition_files = named_paths(eval_partitions);
      eval_common.apply(config);
    } else if (*sweep) {
      const ex::Kind kind = sweep_kind == "fuzzy"        ? ex::Kind::FuzzySweep
                            : sweep_kind == "cut-offset" ? ex::Kind::CutOffsetSweep
                                                         : ex::Kind::RefinementSweep;
      config = ex::default_config(kind);
      if (sweep_n) config.n = *sweep_n;
      if (sweep_m) config.m = *sweep_m;
      if (sweep_blocks) config.blocks = *sweep_blocks;
      if (sweep_depth) config.depth = *sweep_depth;
      if (!sweep_mixing.empty()) config.mixing_indices = sweep_mixing;
      if (sweep_cut_step) config.cut_step = *sweep_cut_step;
      if (sweep_offset_step) config.offset_step = *sweep_offset_step;
      if (sweep_max_offset) config.max_offset = *sweep_max_offset;
      sweep_common.apply(config);
    } else if (*merge_split) {
      config = ex::default_config(ex::Kind::MergeSplit);
      if (ms_n) config.n = *ms_n;
      if (ms_m) config.m = *ms_m;
      if (!ms_sizes.empty()) config.sizes = ms_sizes;
      if (!ms_probs.empty()) config.probs = ms_probs;
      config.inverse_sizes = ms_inverse;
      config.renormalize = !ms_raw;
      ms_common.apply(config);
    } else if (*zkc) {
      config = ex::default_config(ex::Kind::Zkc);
      if (zkc_edges) config.edges_file = *zkc_edges;
      if (!zkc_partitions.empty()) config.partition_files = named_paths(zkc_partitions);
      config.symmetrize = !zkc_as_is;
      if (zkc_random) config.random_partitions = *zkc_random;
      if (zkc_refinements) config.refinements = *zkc_refinements;
      if (zkc_max_blocks) config.max_random_blocks = *zkc_max_blocks;
      zkc_common.apply(config);
    } else if (*run) {
      config = ex::read_config(run_path);
      if (run_out) config.out_dir = *run_out;
    } else if (*config_cmd) {
      std::cout << ex::to_json(ex::default_config(ex::parse_kind(config_kind))).dump(2)
                << '\n';
      return 0;
    }
    ex::validate(config);
    run_and_report(config, threads);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error (" << ebsbm::to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
