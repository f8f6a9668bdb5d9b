#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ebsbm/model.hpp"
#include "ebsbm/rng.hpp"

namespace ebsbm::experiments {

inline constexpr const char* kToolName = "ebsbm";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Kind {
  Trace,
  RefinementSweep,
  FuzzySweep,
  CutOffsetSweep,
  MergeSplit,
  Zkc,
  Evaluate,
};

enum class OutputFormat { Csv, Json };

std::string to_string(Kind kind);
Kind parse_kind(const std::string& text);

struct NamedPath {
  std::string name;
  std::string path;

  bool operator==(const NamedPath&) const = default;
};

/// Everything needed to re-run one experiment. Defaults are those of the
/// four-block refinement sweep; default_config() adjusts the ones that
/// differ between kinds.
struct ExperimentConfig {
  Kind kind = Kind::RefinementSweep;

  std::size_t n = 128;
  std::size_t m = 2800;
  std::size_t blocks = 4;                    // planted blocks (refinement sweep)
  unsigned depth = 7;                        // dyadic family depth
  std::vector<unsigned> mixing_indices{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::size_t cut_step = 8;
  std::size_t offset_step = 4;
  std::size_t max_offset = 32;
  std::vector<std::size_t> sizes;            // merge-split block sizes
  std::vector<double> probs;                 // merge-split within-block probs
  std::vector<std::size_t> inverse_sizes;    // empty: derived from sizes
  bool renormalize = true;

  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::size_t orders = 10;                   // 0: stored edge order only

  std::string edges_file;
  std::vector<NamedPath> partition_files;
  bool symmetrize = true;
  std::size_t random_partitions = 100;
  std::size_t max_random_blocks = 5;
  std::size_t refinements = 99;

  std::string out_dir = "results";
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Reference parameters for each kind (four-block refinement sweep, fuzzy
/// sweep with depth 5, merge-split on 12 nodes, ...).
ExperimentConfig default_config(Kind kind);

/// Throws Error{Config} naming the offending field.
void validate(const ExperimentConfig& config);

nlohmann::json to_json(const ExperimentConfig& config);
/// Missing fields keep the kind's defaults; unknown fields and type
/// mismatches throw Error{Config} naming the field.
ExperimentConfig config_from_json(const nlohmann::json& json);
ExperimentConfig read_config(const std::filesystem::path& path);

struct ResultRow {
  std::size_t replicate = 0;
  std::string group;
  std::int64_t parameter = 0;
  std::string label;
  std::size_t num_blocks = 0;
  double mean_code_length = 0.0;
  double mean_prediction_probability = 0.0;
  bool winner = false;  // argmin of mean_code_length within (replicate, group)

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  nlohmann::json metadata;  // tool, version, config echo, summary
  std::vector<ResultRow> rows;
};

/// CSV with a single '#'-prefixed JSON metadata line on top.
void write_csv(const ResultTable& table, std::ostream& out);
void write_json(const ResultTable& table, std::ostream& out);

struct TraceRow {
  std::string label;
  std::size_t x = 0;  // 1-based edge rank
  double probability = 0.0;
  double code_length = 0.0;
};

struct TraceTable {
  nlohmann::json metadata;
  std::vector<TraceRow> rows;
};

void write_csv(const TraceTable& table, std::ostream& out);
void write_json(const TraceTable& table, std::ostream& out);

/// Sets `winner` on the earliest minimum of each (replicate, group).
void mark_winners(std::vector<ResultRow>& rows);

struct RunOptions {
  std::size_t threads = 0;  // 0: hardware concurrency
};

ResultTable run_refinement_sweep(const ExperimentConfig& config, const RunOptions& options = {});
ResultTable run_fuzzy_sweep(const ExperimentConfig& config, const RunOptions& options = {});
ResultTable run_cut_offset_sweep(const ExperimentConfig& config, const RunOptions& options = {});
ResultTable run_merge_split(const ExperimentConfig& config, const RunOptions& options = {});
ResultTable run_zkc(const ExperimentConfig& config, const RunOptions& options = {});
ResultTable run_evaluate(const ExperimentConfig& config, const RunOptions& options = {});
TraceTable run_trace(const ExperimentConfig& config);

/// Dispatches on config.kind (everything except Trace).
ResultTable run(const ExperimentConfig& config, const RunOptions& options = {});

/// Writes the table for `config` into config.out_dir and returns the path.
std::filesystem::path write_result(const ExperimentConfig& config,
                                   const ResultTable& table);
std::filesystem::path write_result(const ExperimentConfig& config,
                                   const TraceTable& table);

/// Short human-readable digest for stdout.
std::string summarize(const ResultTable& table);

/// Stream derivation shared by every runner so graph i of a run is the same
/// regardless of which experiment asks for it.
struct Streams {
  static constexpr std::uint64_t kGraphs = 1;
  static constexpr std::uint64_t kOrders = 2;
  static constexpr std::uint64_t kRandomBlockCounts = 3;
  static constexpr std::uint64_t kRandomPartitions = 4;
  static constexpr std::uint64_t kRefinements = 5;

  static Seed of(std::uint64_t master, std::uint64_t stream) {
    return Seed{master, stream};
  }
};

/// Model description used by `generate` and echoed in its sidecar file.
struct ModelSpec {
  std::string type = "diagonal";  // diagonal | mixing | heterogeneous
  std::size_t n = 128;
  std::size_t blocks = 1;
  unsigned mixing_index = 0;
  std::vector<std::size_t> sizes;
  std::vector<double> probs;
  bool renormalize = true;
};

EdgeSbm build_model(const ModelSpec& spec);
nlohmann::json to_json(const ModelSpec& spec);

}  // namespace ebsbm::experiments
