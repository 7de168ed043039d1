#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gmfg/game.hpp"
#include "gmfg/graphon.hpp"
#include "gmfg/solver.hpp"

namespace gmfg {

enum class OutputFormat { csv, json };

struct OutputSpec {
    std::filesystem::path dir = "out";
    OutputFormat format = OutputFormat::csv;
};

/// Game section of a config: either an inline Beach Bar block or a reference
/// to a generic game file (tabular rewards linear in the local aggregate).
struct GameSection {
    std::optional<BeachBarConfig> beach_bar;
    std::optional<std::filesystem::path> file;
};

/// A named override patch applied on top of the base config (RFC 7386 merge
/// semantics on the serialized form).
struct Variant {
    std::string name;
    std::string patch;  // JSON object text
};

struct ExperimentConfig {
    int n_agents = 10;
    int replications = 5;
    std::int64_t base_seed = 0;
    GameSection game;
    GraphonSpec graphon;
    PMDConfig solver;
    OutputSpec output;
    std::vector<Variant> variants;
    std::filesystem::path base_dir;  // resolves relative game-file paths

    void validate() const;
};

/// Parses a config document (JSON text). Throws ConfigError on any problem.
ExperimentConfig parse_config_text(const std::string& text);

/// Reads and parses a config file; relative game-file references resolve
/// against the config file's directory.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical serialization; parse_config_text(config_to_text(c)) reproduces
/// c field by field.
std::string config_to_text(const ExperimentConfig& config);

bool config_equal(const ExperimentConfig& a, const ExperimentConfig& b);

/// Builds the game model named by the config's game section.
GameSpec build_game(const ExperimentConfig& config);

struct TraceRow {
    int replication = 0;  // 1-based
    int t = 0;
    double exploit_last = 0.0;
    double exploit_avg = 0.0;
};

struct SummaryRow {
    int t = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Per-replication traces plus the across-replication min/mean/max of the
/// averaged-policy exploitability per iteration.
struct TraceTable {
    std::vector<TraceRow> rows;
    std::vector<SummaryRow> summary;
};

struct CompareEntry {
    std::string variant;
    TraceTable table;
};

using CompareTable = std::vector<CompareEntry>;

/// Runs `replications` independent mirror-descent runs (seeds base_seed,
/// base_seed + 1, ...) and writes trace and summary files under the output
/// directory. `parallel` bounds the number of replications run concurrently.
TraceTable run_experiment(const ExperimentConfig& config, int parallel = 1);

/// Runs the base config plus each variant against the same base game. A
/// variant that overrides the graphon is solved on its own graphon but its
/// recorded exploitability is measured against the base (true) graphon.
/// The first entry of the result is the base run (named "base").
CompareTable compare_runs(const ExperimentConfig& config, const std::vector<Variant>& variants,
                          int parallel = 1);

/// In-memory runners without file output (used by compare/run internally).
TraceTable run_replications(const ExperimentConfig& config, int parallel,
                            const DiscreteGraphon* eval_graphon = nullptr);

void write_run_files(const ExperimentConfig& config, const TraceTable& table);
void write_compare_files(const ExperimentConfig& config, const CompareTable& table);

}  // namespace gmfg
